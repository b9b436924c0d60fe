#ifndef K3CERT_SUITES_HPP
#define K3CERT_SUITES_HPP

#include <map>
#include <string>

#include "k3cert/bezout.hpp"
#include "k3cert/hyperkahler.hpp"
#include "k3cert/report.hpp"
#include "k3cert/symplectic.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// Certification suites. Each suite produces the machine-readable fields of
// the matching CLI subcommand plus a uniform check list; the CLI and the
// acceptance harness share these implementations.
// ---------------------------------------------------------------------------

struct SuiteOptions {
    std::uint64_t seed = 1;
    int samples = 100;
    int trials = 1000;
    std::map<std::string, double> tolerances;  // name -> positive override

    double tol(const std::string& name, double fallback) const {
        auto it = tolerances.find(name);
        if (it == tolerances.end()) return fallback;
        if (!(it->second > 0))
            throw std::domain_error("SuiteOptions: tolerance overrides must be positive");
        return it->second;
    }
};

inline const std::map<std::string, std::string>& named_surfaces() {
    static const std::map<std::string, std::string> reg = {
        {"fermat", "x0^4+x1^4+x2^4+x3^4"},
    };
    return reg;
}

inline PolyQ surface_poly_from_source(const std::string& source) {
    auto it = named_surfaces().find(source);
    const std::string& text = it != named_surfaces().end() ? it->second : source;
    return parse_poly(text, {"x0", "x1", "x2", "x3"});
}

// --------------------------------------------------------------------------

inline Report check_surface_suite(const PolyQ& f, const SuiteOptions& opt) {
    Report rep;
    rep.command = "check-surface";
    rep.seed = opt.seed;
    Stopwatch sw;
    QuarticSurface X(f);
    SingularityCertificate cert = certify_nonsingular(X, opt.seed);
    double elapsed = sw.ms();

    CheckResult main;
    main.name = "singular-locus-decision";
    main.certifies = "surface-nonsingularity";
    switch (cert.status) {
        case SingStatus::certified_nonsingular: main.status = "pass"; break;
        case SingStatus::singular: main.status = "fail"; break;
        default: main.status = "inconclusive"; break;
    }
    main.deviation = cert.status == SingStatus::certified_nonsingular ? 0.0 : 1.0;
    main.threshold = 0;
    main.elapsed_ms = elapsed;
    rep.checks.push_back(main);

    rep.payload["status"] = to_string(cert.status);
    rep.payload["charts_checked"] = cert.charts_checked;
    rep.payload["elapsed_ms"] = elapsed;
    if (cert.status == SingStatus::singular) {
        // soundness: the witness must kill the equation and all gradients
        Stopwatch sw2;
        CheckResult sound;
        sound.name = "witness-reverification";
        sound.certifies = "singular-witness-soundness";
        sound.threshold = opt.tol("witness", 1e-10);
        if (cert.witness_exact) {
            bool ok = f.evaluate(cert.witness_exact->coords).is_zero();
            for (int v = 0; v < 4 && ok; ++v)
                ok = f.derivative(v).evaluate(cert.witness_exact->coords).is_zero();
            sound.status = ok ? "pass" : "fail";
            sound.deviation = ok ? 0.0 : 1.0;
            rep.payload["witness"] = point_to_json(normalize(*cert.witness_exact));
            rep.payload["witness_kind"] = "exact";
        } else if (cert.witness_numeric) {
            double dev = 0;
            std::vector<Complex> pt(cert.witness_numeric->coords.begin(),
                                    cert.witness_numeric->coords.end());
            double mx = 0;
            for (const auto& c : pt) mx = std::max(mx, std::abs(c));
            PolyC fn = f.to_numeric();
            dev = std::abs(fn.evaluate(pt)) /
                  (std::max(1.0, fn.max_coeff_abs()) * mx * mx * mx * mx);
            for (int v = 0; v < 4; ++v) {
                PolyC g = f.derivative(v).to_numeric();
                dev = std::max(dev, std::abs(g.evaluate(pt)) /
                                        (std::max(1.0, g.max_coeff_abs()) * mx * mx * mx));
            }
            sound.deviation = dev;
            sound.status = dev <= sound.threshold ? "pass" : "fail";
            rep.payload["witness"] = point_to_json(*cert.witness_numeric);
            rep.payload["witness_kind"] = "numeric";
        }
        sound.elapsed_ms = sw2.ms();
        rep.checks.push_back(sound);
    }
    if (cert.status == SingStatus::inconclusive) rep.payload["reason"] = cert.reason;
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report check_omega_suite(const PolyQ& f, const SuiteOptions& opt) {
    Report rep;
    rep.command = "check-omega";
    rep.seed = opt.seed;
    QuarticSurface X(f);
    if (certify_nonsingular(X, opt.seed).status != SingStatus::certified_nonsingular)
        throw std::domain_error("check-omega: surface is not certified nonsingular");

    auto pts = sample_points(X, opt.samples, opt.seed);

    {
        Stopwatch sw;
        double worst = 0;
        for (const auto& p : pts) worst = std::max(worst, pivot_consistency(X, p));
        double tol = opt.tol("pivot", 1e-9);
        CheckResult c{"pivot-consistency", "pivot-agreement",
                      worst <= tol ? "pass" : "fail", worst, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["pivot_max_dev"] = worst;
    }
    {
        Stopwatch sw;
        Json per_pair, per_pair_used;
        double worst_all = 0;
        int min_used = opt.samples;
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                double worst = 0;
                int used = 0;
                for (const auto& p : pts) {
                    double mx = 0;
                    for (const auto& c : p.coords) mx = std::max(mx, std::abs(c));
                    if (std::abs(p.coords[static_cast<std::size_t>(a)]) < 1e-6 * mx ||
                        std::abs(p.coords[static_cast<std::size_t>(b)]) < 1e-6 * mx)
                        continue;
                    worst = std::max(worst,
                                     overlap_consistency(X, p, ChartId(a, 4), ChartId(b, 4)));
                    ++used;
                }
                std::string key = std::to_string(a) + std::to_string(b);
                per_pair[key] = worst;
                per_pair_used[key] = used;
                worst_all = std::max(worst_all, worst);
                min_used = std::min(min_used, used);
            }
        }
        // every chart pair must actually be exercised by the sample set
        double tol = opt.tol("overlap", 1e-9);
        bool ok = worst_all <= tol && min_used >= std::max(1, opt.samples / 2);
        CheckResult c{"overlap-consistency", "chart-overlap-agreement",
                      ok ? "pass" : "fail", worst_all, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["overlap_max_dev"] = per_pair;
        rep.payload["overlap_points_used"] = per_pair_used;
    }
    {
        Stopwatch sw;
        double min_mag = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) {
            TangentFrame fr = tangent_frame(X, p);
            min_mag = std::min(min_mag, std::abs(omega_eval(X, p, fr.V1, fr.V2).value));
        }
        CheckResult c{"nondegeneracy", "form-nondegeneracy",
                      min_mag > 0 ? "pass" : "fail", min_mag, 0, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["nondegeneracy_min"] = min_mag;
    }
    {
        // exact gluing certificate for this surface plus random quartics
        Stopwatch sw;
        Rng rng(opt.seed + 17);
        bool ok = verify_transition_identity(f);
        int extras = 5;
        for (int k = 0; k < extras && ok; ++k)
            ok = verify_transition_identity(rng.random_homogeneous(4, 4));
        CheckResult c{"transition-identity", "transition-identity",
                      ok ? "pass" : "fail", ok ? 0.0 : 1.0, 0, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["transition_identity_quartics"] = extras + 1;
    }
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report check_hk_suite(const SuiteOptions& opt) {
    Report rep;
    rep.command = "check-hk";
    rep.seed = opt.seed;
    Rng rng(opt.seed);

    auto random_params = [&]() {
        return HKParams::solved(std::exp(0.3 * rng.gauss()), std::exp(0.5 * rng.gauss()),
                                rng.cgauss(), rng.uniform(-M_PI, M_PI));
    };

    {
        Stopwatch sw;
        double worst = 0;
        for (int t = 0; t < opt.trials; ++t) {
            HKParams p = random_params();
            JTriple j = build_Jtriple(p);
            TangentFrame fr;
            fr.S = 1.0 + std::abs(rng.gauss());
            fr.f_pivot = std::polar(0.3 + std::abs(rng.gauss()), p.theta1);
            worst = std::max(worst, check_quaternion(j, build_metric(p, fr)));
        }
        double tol = opt.tol("quaternion", 1e-12);
        CheckResult c{"quaternion-relations", "quaternion-and-metric",
                      worst <= tol ? "pass" : "fail", worst, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["quaternion_max_dev"] = worst;
    }
    {
        Stopwatch sw;
        double worst_valid = 0;
        for (int t = 0; t < opt.trials; ++t) {
            double a1 = rng.uniform(0.05 * M_PI, 0.95 * M_PI);
            double phi = rng.uniform(0, 2 * M_PI);
            double s1 = std::sin(a1);
            KahlerAngles ang{a1, std::acos(s1 * std::cos(phi)), std::acos(s1 * std::sin(phi))};
            worst_valid = std::max(worst_valid, check_quaternion(angle_matrices(ang)));
        }
        double tol = opt.tol("angle", 1e-12);
        CheckResult c{"angle-matrices-valid", "angle-matrix-consistency",
                      worst_valid <= tol ? "pass" : "fail", worst_valid, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["angle_identity_max_dev"] = worst_valid;
    }
    {
        // perturbed angle triples must fail by at least a tenth of the
        // identity violation
        Stopwatch sw;
        double min_ratio = std::numeric_limits<double>::infinity();
        int tested = 0;
        for (int t = 0; t < std::max(100, opt.trials / 10); ++t) {
            double a1 = rng.uniform(0.1 * M_PI, 0.9 * M_PI);
            double phi = rng.uniform(0, 2 * M_PI);
            double s1 = std::sin(a1);
            KahlerAngles ang{a1, std::acos(s1 * std::cos(phi)), std::acos(s1 * std::sin(phi))};
            double delta = rng.uniform(1e-3, 0.1);
            ang.a2 = std::acos(std::clamp(std::cos(ang.a2) + delta, -1.0, 1.0));
            double violation = angle_identity_residual(ang);
            if (violation < 1e-3) continue;
            min_ratio = std::min(min_ratio,
                                 check_quaternion(angle_matrices(ang)) / (violation / 10.0));
            ++tested;
        }
        CheckResult c{"angle-violation-detection", "angle-violation-detectability",
                      (tested > 0 && min_ratio >= 1.0) ? "pass" : "fail",
                      min_ratio, 1.0, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["angle_detect_min_ratio"] = min_ratio;
    }
    {
        Stopwatch sw;
        double worst = 0;
        for (int t = 0; t < opt.trials / 10; ++t) {
            HKParams p = random_params();
            RotationMatrix A{rng.so3()};
            S2Point x{rng.unit_sphere()};
            if (std::abs(1.0 + A.row_dot(0, x.x)) < 1e-3) continue;
            DiskDerivatives d = solve_triholo(A, x, p, rng.cgauss(), rng.cgauss());
            worst = std::max(worst, triholo_residual(A, x, p, d));
        }
        double tol = opt.tol("intertwining", 1e-12);
        CheckResult c{"intertwining-solved-data", "intertwining-residual",
                      worst <= tol ? "pass" : "fail", worst, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["triholo_residual_max"] = worst;
    }
    {
        // the angle identity holds exactly on rho*S = 2 and fails off it
        Stopwatch sw;
        double worst_on = 0;
        double min_off = std::numeric_limits<double>::infinity();
        int done = 0;
        while (done < std::max(100, opt.trials / 10)) {
            RotationMatrix A{rng.so3()};
            S2Point x{rng.unit_sphere()};
            double a1x = A.row_dot(0, x.x);
            if (a1x * a1x > 0.9) continue;  // aligned sliver excluded
            double rho = std::exp(0.3 * rng.gauss());
            double S = 2.0 / rho;
            auto on = kahler_cosines(A, x, rho, S);
            worst_on = std::max(worst_on, cos_identity_residual(on[0], on[1], on[2]));
            double bump = rng.uniform01() < 0.5 ? 1.01 : 0.99;
            auto off = kahler_cosines(A, x, rho, S * bump);
            min_off = std::min(min_off, cos_identity_residual(off[0], off[1], off[2]));
            ++done;
        }
        double tol = opt.tol("angle-sum", 1e-10);
        bool pass = worst_on <= tol && min_off >= 1e-3;
        CheckResult c{"angle-sum-constancy", "angle-sum-constancy",
                      pass ? "pass" : "fail", worst_on, tol, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["s_constancy_iff_dev"] = worst_on;
        rep.payload["s_constancy_min_violation"] = min_off;
    }
    rep.notes.push_back(
        "third Kahler angle computed from the imaginary part of the "
        "holomorphic-form pairing (the symmetric-counterpart line is "
        "corrected accordingly)");
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report verify_h_suite() {
    Report rep;
    rep.command = "verify-h";
    Stopwatch sw;
    HMapReport h = verify_map_h();
    double elapsed = sw.ms();
    auto boolcheck = [&](const char* name, const char* tag, bool ok) {
        rep.checks.push_back(
            CheckResult{name, tag, ok ? "pass" : "fail", ok ? 0.0 : 1.0, 0, elapsed / 4});
    };
    boolcheck("composition-identity", "map-h-identity", h.composition_zero);
    boolcheck("holomorphy", "map-h-holomorphy", h.holomorphic);
    boolcheck("origin-degeneracy", "map-h-origin", h.origin_singular);
    boolcheck("constant-first-coordinate", "map-h-constant-coordinate",
              h.first_coord_ratio == "omega");
    rep.payload["symbolic_identity"] = h.composition_zero;
    rep.payload["origin_singular"] = h.origin_singular;
    rep.payload["z1_constant"] = h.first_coord_ratio;
    rep.payload["holomorphic"] = h.holomorphic;
    rep.payload["image_residual"] = h.image_residual;
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report bezout_suite(const SuiteOptions& opt) {
    Report rep;
    rep.command = "bezout-suite";
    rep.seed = opt.seed;
    Rng rng(opt.seed);
    {
        Stopwatch sw;
        int done = 0;
        bool ok = true;
        double worst_pair_ms = 0;
        while (done < 20) {
            int n = 1 + static_cast<int>(rng.raw() % 4);
            int m = 1 + static_cast<int>(rng.raw() % 4);
            PolyQ a = rng.random_homogeneous(3, static_cast<unsigned>(n), 0.7, 4, false);
            PolyQ b = rng.random_homogeneous(3, static_cast<unsigned>(m), 0.7, 4, false);
            if (a.degree() != n || b.degree() != m) continue;
            if (!gcd_poly(a, b).is_constant()) continue;
            Stopwatch pair_sw;
            IntersectionReport r = intersect(PlaneCurve(a), PlaneCurve(b), opt.seed + done);
            worst_pair_ms = std::max(worst_pair_ms, pair_sw.ms());
            ok = ok && r.total == n * m;
            ++done;
        }
        CheckResult c{"random-coprime-counts", "bezout-count", ok ? "pass" : "fail",
                      ok ? 0.0 : 1.0, 0, sw.ms()};
        rep.checks.push_back(c);
        rep.payload["pairs_checked"] = done;
        rep.payload["worst_pair_ms"] = worst_pair_ms;
    }
    {
        Stopwatch sw;
        const std::vector<std::string> XYZ = {"x", "y", "z"};
        IntersectionReport r = intersect(PlaneCurve(parse_poly("y*z - x^2", XYZ)),
                                         PlaneCurve(parse_poly("y", XYZ)), opt.seed);
        bool ok = r.points.size() == 1 && r.points[0].multiplicity == 2 && r.total == 2;
        CheckResult c{"tangency-count", "tangency-multiplicity", ok ? "pass" : "fail",
                      ok ? 0.0 : 1.0, 0, sw.ms()};
        rep.checks.push_back(c);
    }
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report cde_suite(const SuiteOptions& opt) {
    Report rep;
    rep.command = "cde-suite";
    rep.seed = opt.seed;
    Rng rng(opt.seed);
    PolyQ fermat = surface_poly_from_source("fermat");
    {
        Stopwatch sw;
        bool ok = true;
        for (int k = 0; k < 10; ++k) {
            GaussRat sigma = rng.small_gauss_rat();
            CDEVerdict v = cde_finiteness(fermat, sigma, opt.seed + k);
            ok = ok && v.kind == CDEVerdict::Kind::finite && v.points.empty();
        }
        CheckResult c{"exact-slices-empty", "slice-triple-finiteness", ok ? "pass" : "fail",
                      ok ? 0.0 : 1.0, 0, sw.ms()};
        rep.checks.push_back(c);
    }
    {
        Stopwatch sw;
        const Complex sigma = std::polar(1.0, M_PI / 4.0);
        CDEVerdict v = cde_finiteness(fermat, sigma, opt.seed);
        double resid = 1.0;
        bool ok = v.kind == CDEVerdict::Kind::finite && v.points.size() == 1;
        if (ok) {
            ProjPointC want{{Complex(1, 0), Complex(0, 0), Complex(0, 0)}};
            ok = proj_equal(v.points[0].point, want, opt.tol("slice-residual", 1e-8));
            CDETriple<Complex> t = build_CDE(fermat, sigma);
            std::vector<Complex> pt(v.points[0].point.coords.begin(),
                                    v.points[0].point.coords.end());
            resid = std::max({std::abs(t.chom.evaluate(pt)), std::abs(t.dhom.evaluate(pt)),
                              std::abs(t.ehom.evaluate(pt))});
            ok = ok && resid <= opt.tol("slice-residual", 1e-8);
        }
        CheckResult c{"unit-root-slice-point", "slice-triple-finiteness",
                      ok ? "pass" : "fail", resid, opt.tol("slice-residual", 1e-8), sw.ms()};
        rep.checks.push_back(c);
        rep.payload["unit_root_points"] = static_cast<int>(v.points.size());
        rep.payload["unit_root_residual"] = resid;
    }
    {
        // no singular branch on certified surfaces
        Stopwatch sw;
        const std::vector<std::string> certified = {
            "x0^4+x1^4+x2^4+x3^4",
            "x0^3*x1 + x1^4 + x2^4 + x3^4",
            "x0^4 + 2*x1^4 + 3*x2^4 + x3^4",
            "x0^4 + x1^4 + x2^3*x3 + x3^4",
        };
        bool ok = true;
        for (const auto& s : certified) {
            PolyQ f = parse_poly(s, {"x0", "x1", "x2", "x3"});
            QuarticSurface X(f);
            ok = ok && certify_nonsingular(X, opt.seed).status ==
                           SingStatus::certified_nonsingular;
            for (int k = 0; k < 3 && ok; ++k) {
                CDEVerdict v = cde_finiteness(f, rng.small_gauss_rat(), opt.seed + k);
                ok = ok && v.kind == CDEVerdict::Kind::finite;
            }
        }
        CheckResult c{"no-singular-branch-when-certified", "slice-singular-branch",
                      ok ? "pass" : "fail", ok ? 0.0 : 1.0, 0, sw.ms()};
        rep.checks.push_back(c);
    }
    rep.finish();
    return rep;
}

// --------------------------------------------------------------------------

inline Report run_all(const SuiteOptions& opt) {
    Report rep;
    rep.command = "all";
    rep.seed = opt.seed;
    PolyQ fermat = surface_poly_from_source("fermat");
    for (const Report& sub :
         {check_surface_suite(fermat, opt), check_omega_suite(fermat, opt),
          check_hk_suite(opt), verify_h_suite(), bezout_suite(opt), cde_suite(opt)}) {
        for (const auto& c : sub.checks) {
            CheckResult prefixed = c;
            prefixed.name = sub.command + "/" + c.name;
            rep.checks.push_back(prefixed);
        }
        rep.payload[sub.command] = sub.payload;
        for (const auto& n : sub.notes) rep.notes.push_back(n);
    }
    rep.finish();
    return rep;
}

}  // namespace k3cert

#endif
