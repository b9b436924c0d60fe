#ifndef K3CERT_SURFACE_HPP
#define K3CERT_SURFACE_HPP

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "k3cert/multipoly.hpp"
#include "k3cert/polygcd.hpp"
#include "k3cert/projective.hpp"
#include "k3cert/resultant.hpp"
#include "k3cert/rng.hpp"
#include "k3cert/roots.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// Quartic surface X = {f = 0} in CP^3 with cached chart equations.
// ---------------------------------------------------------------------------

enum class SingStatus { unchecked, certified_nonsingular, singular, inconclusive };

inline const char* to_string(SingStatus s) {
    switch (s) {
        case SingStatus::unchecked: return "unchecked";
        case SingStatus::certified_nonsingular: return "certified-nonsingular";
        case SingStatus::singular: return "singular";
        case SingStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct SingularityCertificate {
    SingStatus status = SingStatus::unchecked;
    std::optional<ProjPointQ> witness_exact;
    std::optional<ProjPointC> witness_numeric;
    std::string reason;
    int charts_checked = 0;
};

/// Scale a polynomial by an exact power of two so the largest coefficient
/// has magnitude near one; keeps huge resultant coefficients convertible to
/// doubles without changing the zero set.
inline PolyQ scale_pow2(const PolyQ& p) {
    if (p.is_zero()) return p;
    long maxbits = -1000000;
    auto bits = [](const mpq_class& q) -> long {
        if (q == 0) return -1000000;
        return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
               static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
    };
    for (const auto& [e, c] : p.terms())
        maxbits = std::max({maxbits, bits(c.re), bits(c.im)});
    if (maxbits == -1000000) return p;
    mpq_class s;
    if (maxbits >= 0) {
        mpz_class d(1);
        mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(maxbits));
        s = mpq_class(1, 1) / mpq_class(d);
    } else {
        mpz_class n(1);
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(-maxbits));
        s = mpq_class(n);
    }
    PolyQ q = p;
    q.scale(GaussRat(s));
    return q;
}

struct SurfacePointNum {
    std::array<Complex, 4> coords;
    ChartId chart;    // max-modulus coordinate
    double residual;  // |f| relative to coefficient and coordinate scale
};

class QuarticSurface {
  public:
    explicit QuarticSurface(PolyQ f) : f_(std::move(f)) {
        if (f_.nvars() != 4) throw std::invalid_argument("QuarticSurface: needs 4 variables");
        if (f_.is_zero() || !check_homogeneous(f_, 4))
            throw std::invalid_argument("QuarticSurface: needs a nonzero homogeneous quartic");
        for (int c = 0; c < 4; ++c) {
            chart_eq_[c] = f_.substitute_const(c, GaussRat(1));
            chart_eq_num_[c] = chart_eq_[c].to_numeric();
            for (int k = 0; k < 3; ++k) {
                chart_partials_[c][k] = chart_eq_[c].derivative(k);
                chart_partials_num_[c][k] = chart_partials_[c][k].to_numeric();
            }
        }
        for (int v = 0; v < 4; ++v) grad_[v] = f_.derivative(v);
        fnum_cache_ = f_.to_numeric();
        fnum_max_ = fnum_cache_.max_coeff_abs();
    }

    const PolyQ& poly() const { return f_; }
    const PolyQ& gradient(int v) const { return grad_[static_cast<std::size_t>(v)]; }
    const PolyQ& chart_eq(int c) const { return chart_eq_[static_cast<std::size_t>(c)]; }
    const PolyC& chart_eq_num(int c) const { return chart_eq_num_[static_cast<std::size_t>(c)]; }
    const PolyQ& chart_partial(int c, int k) const {
        return chart_partials_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }
    const PolyC& chart_partial_num(int c, int k) const {
        return chart_partials_num_[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
    }

    const SingularityCertificate& certificate() const { return cert_; }
    void set_certificate(SingularityCertificate c) { cert_ = std::move(c); }

    /// Exact membership test.
    bool contains(const ProjPointQ& p) const {
        return f_.evaluate(p.coords).is_zero();
    }
    /// Numeric membership: residual at most tol relative to scale.
    bool contains(const ProjPointC& p, double tol = 1e-10) const {
        return residual_at(p.coords.data(), static_cast<int>(p.coords.size())) <= tol;
    }

    double residual_at(const Complex* coords, int n) const {
        std::vector<Complex> pt(coords, coords + n);
        double mx = 0;
        for (const auto& c : pt) mx = std::max(mx, std::abs(c));
        if (mx == 0) return 0;
        double scale = std::max(1.0, fnum_max_) * mx * mx * mx * mx;
        return std::abs(fnum().evaluate(pt)) / scale;
    }

    const PolyC& fnum() const { return fnum_cache_; }

  private:
    PolyQ f_;
    std::array<PolyQ, 4> grad_;
    std::array<PolyQ, 4> chart_eq_;
    std::array<PolyC, 4> chart_eq_num_;
    std::array<std::array<PolyQ, 3>, 4> chart_partials_;
    std::array<std::array<PolyC, 3>, 4> chart_partials_num_;
    SingularityCertificate cert_;
    PolyC fnum_cache_;
    double fnum_max_ = 1.0;
};

// ---------------------------------------------------------------------------
// Nonsingularity certification by iterated resultants.
// ---------------------------------------------------------------------------

namespace detail {

enum class ChartOutcome { clean, witness, excess, unbounded };

struct ChartResult {
    ChartOutcome outcome;
    std::vector<Complex> witness_affine;  // chart-local, when outcome == witness
};

inline double poly_scale_at(const PolyC& p, const std::vector<Complex>& pt) {
    double m = 1;
    for (const auto& c : pt) m = std::max(m, std::abs(c));
    double deg = std::max(p.degree(), 0);
    return std::max(p.max_coeff_abs(), 1e-30) * std::pow(m, deg);
}

/// Gauss-Newton polish of a chart-local candidate on the 4-polynomial system
/// (chart equation plus its three partials). Returns the relative residual.
inline double polish_candidate(const std::vector<PolyC>& sys, std::vector<Complex>& x) {
    std::vector<std::array<PolyC, 3>> jac(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
        for (int j = 0; j < 3; ++j)
            jac[i][static_cast<std::size_t>(j)] = sys[i].derivative(j);
    for (int it = 0; it < 40; ++it) {
        Eigen::VectorXcd r(static_cast<int>(sys.size()));
        Eigen::MatrixXcd J(static_cast<int>(sys.size()), 3);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            r(static_cast<int>(i)) = sys[i].evaluate(x);
            for (int j = 0; j < 3; ++j)
                J(static_cast<int>(i), j) = jac[i][static_cast<std::size_t>(j)].evaluate(x);
        }
        Eigen::VectorXcd dx = J.colPivHouseholderQr().solve(r);
        double step = dx.norm();
        for (int j = 0; j < 3; ++j) x[static_cast<std::size_t>(j)] -= dx(j);
        if (step < 1e-14 * (1.0 + std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]))) break;
    }
    double dev = 0;
    for (const auto& p : sys)
        dev = std::max(dev, std::abs(p.evaluate(x)) / poly_scale_at(p, x));
    return dev;
}

/// Eliminate variables by iterated resultants, last variable first, pairing
/// the minimum-degree pivot against the rest. A nonzero constant anywhere in
/// a stage certifies that the system has no common zero (resultant vanishing
/// is necessary for one). Surviving candidates are back-substituted
/// numerically and either refuted or polished into a witness.
inline ChartResult eliminate_chart(const std::vector<PolyQ>& sys_in) {
    std::vector<PolyQ> cur;
    for (const auto& p : sys_in)
        if (!p.is_zero()) cur.push_back(scale_pow2(p));
    if (cur.empty()) return {ChartOutcome::excess, {}};

    auto has_nonzero_const = [](const std::vector<PolyQ>& ps) {
        for (const auto& p : ps)
            if (!p.is_zero() && p.is_constant()) return true;
        return false;
    };
    if (has_nonzero_const(cur)) return {ChartOutcome::clean, {}};

    std::array<std::vector<PolyQ>, 3> stages;  // stages[v]: polys before eliminating var v
    for (int v = 2; v >= 1; --v) {
        stages[static_cast<std::size_t>(v)] = cur;
        std::vector<PolyQ> with_v, without_v;
        for (const auto& p : cur)
            (p.degree_in(v) > 0 ? with_v : without_v).push_back(p);
        if (with_v.empty()) {
            cur = without_v;
        } else {
            std::size_t piv = 0;
            for (std::size_t i = 1; i < with_v.size(); ++i)
                if (with_v[i].degree_in(v) < with_v[piv].degree_in(v)) piv = i;
            std::vector<PolyQ> next = without_v;
            for (std::size_t i = 0; i < with_v.size(); ++i) {
                if (i == piv) continue;
                PolyQ r = resultant(with_v[piv], with_v[i], v);
                if (r.is_zero()) return {ChartOutcome::excess, {}};
                next.push_back(scale_pow2(r));
            }
            if (next.empty()) return {ChartOutcome::unbounded, {}};
            cur = next;
        }
        if (cur.empty()) return {ChartOutcome::unbounded, {}};
        if (has_nonzero_const(cur)) return {ChartOutcome::clean, {}};
    }
    stages[0] = cur;

    // numeric back-substitution over the recorded stages
    const double loose = 1e-4;
    bool degenerate_slice = false;
    auto stage_roots = [&](const std::vector<PolyC>& polys,
                           const std::vector<Complex>& fixed) -> std::vector<Complex> {
        // specialize the first fixed.size() variables; remaining univariate
        std::vector<std::vector<Complex>> dense;
        for (const auto& p : polys) {
            PolyC q = p;
            for (int j = static_cast<int>(fixed.size()) - 1; j >= 0; --j)
                q = q.substitute_const(j, fixed[static_cast<std::size_t>(j)]);
            std::vector<Complex> c = dense_univariate(q, 0);
            uni::strip_numeric(c, 1e-12);
            if (!c.empty()) dense.push_back(std::move(c));
        }
        if (dense.empty()) {
            // every polynomial vanished on the slice: positive-dimensional
            // fiber the elimination missed; force a coordinate change
            degenerate_slice = true;
            return {};
        }
        std::size_t piv = 0;
        for (std::size_t i = 1; i < dense.size(); ++i)
            if (dense[i].size() < dense[piv].size()) piv = i;
        if (dense[piv].size() <= 1) return {};  // nonzero constant: no root
        std::vector<Complex> out;
        for (Complex r : companion_roots(dense[piv])) {
            r = newton_polish(dense[piv], r);
            bool ok = true;
            for (std::size_t i = 0; i < dense.size() && ok; ++i) {
                double scale = 1;
                for (const auto& cc : dense[i]) scale = std::max(scale, std::abs(cc));
                scale *= std::pow(std::max(1.0, std::abs(r)),
                                  static_cast<double>(dense[i].size() - 1));
                ok = std::abs(uni::eval(dense[i], r)) <= loose * scale;
            }
            if (ok) out.push_back(r);
        }
        return out;
    };

    std::array<std::vector<PolyC>, 3> stages_num;
    for (int v = 0; v < 3; ++v)
        for (const auto& p : stages[static_cast<std::size_t>(v)])
            stages_num[static_cast<std::size_t>(v)].push_back(p.to_numeric());

    std::vector<PolyC> full_sys;
    for (const auto& p : sys_in)
        if (!p.is_zero()) full_sys.push_back(scale_pow2(p).to_numeric());

    for (Complex a0 : stage_roots(stages_num[0], {})) {
        for (Complex a1 : stage_roots(stages_num[1], {a0})) {
            for (Complex a2 : stage_roots(stages_num[2], {a0, a1})) {
                std::vector<Complex> cand = {a0, a1, a2};
                double dev = polish_candidate(full_sys, cand);
                if (dev <= 1e-10) return {ChartOutcome::witness, cand};
            }
        }
    }
    if (degenerate_slice) return {ChartOutcome::excess, {}};
    return {ChartOutcome::clean, {}};
}

inline std::optional<std::array<std::array<GaussRat, 4>, 4>> random_gl4(Rng& rng) {
    std::array<std::array<GaussRat, 4>, 4> m;
    std::array<std::array<mpq_class, 4>, 4> a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            a[i][j] = mpq_class(rng.uniform_int(-3, 3));
            m[i][j] = GaussRat(a[i][j]);
        }
    // exact determinant by cofactor expansion (mpq_class return type forces
    // evaluation; gmpxx expression templates must not outlive their operands)
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) -> mpq_class {
        mpq_class m0 = a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
        mpq_class m1 = a[r1][c0] * a[r2][c2] - a[r1][c2] * a[r2][c0];
        mpq_class m2 = a[r1][c0] * a[r2][c1] - a[r1][c1] * a[r2][c0];
        return a[r0][c0] * m0 - a[r0][c1] * m1 + a[r0][c2] * m2;
    };
    mpq_class det = a[0][0] * det3(1, 2, 3, 1, 2, 3) - a[0][1] * det3(1, 2, 3, 0, 2, 3) +
                    a[0][2] * det3(1, 2, 3, 0, 1, 3) - a[0][3] * det3(1, 2, 3, 0, 1, 2);
    if (det == 0) return std::nullopt;
    return m;
}

inline PolyQ apply_linear(const PolyQ& f, const std::array<std::array<GaussRat, 4>, 4>& m) {
    std::vector<PolyQ> images;
    for (int i = 0; i < 4; ++i) {
        PolyQ li(4);
        for (int j = 0; j < 4; ++j)
            li += PolyQ::constant(4, m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                  PolyQ::variable(4, j);
        images.push_back(li);
    }
    return f.compose(images);
}

}  // namespace detail

/// Decide the singular locus of X: a clean iterated-resultant chain in all
/// four charts certifies nonsingularity; a surviving candidate is verified
/// against f and its four gradients and reported as a witness; identically
/// vanishing intermediate resultants trigger random exact coordinate changes
/// (up to five) before giving up as inconclusive.
inline SingularityCertificate certify_nonsingular(QuarticSurface& X, std::uint64_t seed = 1) {
    Rng rng(seed);
    SingularityCertificate cert;

    auto verify_witness = [&](const ProjPointC& w) -> bool {
        double dev = X.residual_at(w.coords.data(), 4);
        for (int v = 0; v < 4; ++v) {
            std::vector<Complex> pt(w.coords.begin(), w.coords.end());
            double mx = 0;
            for (const auto& c : pt) mx = std::max(mx, std::abs(c));
            PolyC g = X.gradient(v).to_numeric();
            double scale = std::max(1.0, g.max_coeff_abs()) * mx * mx * mx;
            dev = std::max(dev, std::abs(g.evaluate(pt)) / scale);
        }
        return dev <= 1e-10;
    };
    auto verify_witness_exact = [&](const ProjPointQ& w) -> bool {
        if (!X.poly().evaluate(w.coords).is_zero()) return false;
        for (int v = 0; v < 4; ++v)
            if (!X.gradient(v).evaluate(w.coords).is_zero()) return false;
        return true;
    };

    // seeded multistart witness search over the chart systems; used as a
    // fallback when elimination degenerates (never certifies nonsingularity)
    auto multistart_witness = [&]() -> bool {
        for (int chart = 0; chart < 4; ++chart) {
            std::vector<PolyC> sys = {X.chart_eq_num(chart)};
            for (int k = 0; k < 3; ++k) sys.push_back(X.chart_partial_num(chart, k));
            for (int start = 0; start < 40; ++start) {
                std::vector<Complex> x = {rng.cgauss(), rng.cgauss(), rng.cgauss()};
                double dev = detail::polish_candidate(sys, x);
                double mag = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
                if (dev > 1e-10 || mag > 1e6) continue;
                std::vector<Complex> hom;
                std::size_t v = 0;
                for (int j = 0; j < 4; ++j)
                    hom.push_back(j == chart ? Complex(1, 0) : x[v++]);
                ProjPointC wn{hom};
                std::vector<GaussRat> ex;
                for (const auto& c : hom) ex.push_back(gauss_reconstruct(c, 64));
                try {
                    ProjPointQ wq(ex);
                    if (verify_witness_exact(wq)) {
                        cert.status = SingStatus::singular;
                        cert.witness_exact = wq;
                        cert.witness_numeric = wn;
                        return true;
                    }
                } catch (const std::exception&) {
                }
                if (verify_witness(wn)) {
                    cert.status = SingStatus::singular;
                    cert.witness_numeric = wn;
                    return true;
                }
            }
        }
        return false;
    };

    bool fallback_tried = false;
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::array<std::array<GaussRat, 4>, 4> change{};
        bool identity = attempt == 0;
        PolyQ fa = X.poly();
        if (!identity) {
            auto m = detail::random_gl4(rng);
            if (!m) continue;
            change = *m;
            fa = detail::apply_linear(X.poly(), change);
        }
        bool all_clean = true;
        bool excess = false;
        cert.charts_checked = 0;
        for (int chart = 0; chart < 4 && all_clean && !excess; ++chart) {
            PolyQ fhat = fa.substitute_const(chart, GaussRat(1));
            std::vector<PolyQ> sys = {fhat, fhat.derivative(0), fhat.derivative(1),
                                      fhat.derivative(2)};
            detail::ChartResult res = detail::eliminate_chart(sys);
            switch (res.outcome) {
                case detail::ChartOutcome::clean:
                    ++cert.charts_checked;
                    break;
                case detail::ChartOutcome::witness: {
                    // lift chart-local candidate to projective original coordinates
                    std::vector<Complex> hom;
                    std::size_t v = 0;
                    for (int j = 0; j < 4; ++j)
                        hom.push_back(j == chart ? Complex(1, 0) : res.witness_affine[v++]);
                    std::vector<Complex> orig(4, Complex(0, 0));
                    for (int i = 0; i < 4; ++i) {
                        for (int j = 0; j < 4; ++j) {
                            Complex mij = identity ? Complex(i == j ? 1.0 : 0.0, 0)
                                                   : change[static_cast<std::size_t>(i)]
                                                           [static_cast<std::size_t>(j)]
                                                               .to_complex();
                            orig[static_cast<std::size_t>(i)] +=
                                mij * hom[static_cast<std::size_t>(j)];
                        }
                    }
                    ProjPointC wn{orig};
                    // try exact reconstruction first
                    std::vector<GaussRat> ex;
                    for (const auto& c : orig) ex.push_back(gauss_reconstruct(c, 64));
                    bool exact_ok = false;
                    try {
                        ProjPointQ wq(ex);
                        if (verify_witness_exact(wq)) {
                            cert.status = SingStatus::singular;
                            cert.witness_exact = wq;
                            cert.witness_numeric = wn;
                            X.set_certificate(cert);
                            return cert;
                        }
                        exact_ok = false;
                    } catch (const std::exception&) {
                        exact_ok = false;
                    }
                    (void)exact_ok;
                    if (verify_witness(wn)) {
                        cert.status = SingStatus::singular;
                        cert.witness_numeric = wn;
                        X.set_certificate(cert);
                        return cert;
                    }
                    all_clean = false;  // unverified candidate: retry with a new frame
                    break;
                }
                case detail::ChartOutcome::excess:
                case detail::ChartOutcome::unbounded:
                    excess = true;
                    break;
            }
        }
        if (all_clean && !excess && cert.charts_checked == 4) {
            cert.status = SingStatus::certified_nonsingular;
            X.set_certificate(cert);
            return cert;
        }
        if (excess && !fallback_tried) {
            // typical for a positive-dimensional singular locus, where random
            // changes cannot help; look for a verified witness right away
            fallback_tried = true;
            if (multistart_witness()) {
                X.set_certificate(cert);
                return cert;
            }
        }
    }
    if (!fallback_tried && multistart_witness()) {
        X.set_certificate(cert);
        return cert;
    }
    cert.status = SingStatus::inconclusive;
    cert.reason = "elimination kept degenerating after 5 coordinate changes";
    X.set_certificate(cert);
    return cert;
}

// ---------------------------------------------------------------------------
// Point sampling and tangent frames.
// ---------------------------------------------------------------------------

/// Sample n numeric points of X by fixing two chart-0 coordinates and solving
/// the remaining univariate quartic, Newton-polished; deterministic in seed.
inline std::vector<SurfacePointNum> sample_points(const QuarticSurface& X, int n,
                                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_points: n must be positive");
    Rng rng(seed);
    std::vector<SurfacePointNum> out;
    const PolyC& fhat = X.chart_eq_num(0);
    int failures = 0;
    while (static_cast<int>(out.size()) < n) {
        if (failures > 100)
            throw std::runtime_error("sample_points: too many degenerate slices");
        Complex z1 = rng.unit_disk();
        Complex z2 = rng.unit_disk();
        PolyC sliced = fhat.substitute_const(0, z1).substitute_const(0, z2);
        std::vector<Complex> c = dense_univariate(sliced, 0);
        uni::strip_numeric(c, 1e-12);
        if (uni::degree(c) < 1) {
            ++failures;
            continue;
        }
        std::vector<Complex> roots = companion_roots(c);
        Complex z3 = roots[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<long>(roots.size()) - 1))];
        z3 = newton_polish(c, z3);
        SurfacePointNum p;
        p.coords = {Complex(1, 0), z1, z2, z3};
        p.residual = X.residual_at(p.coords.data(), 4);
        if (p.residual > 1e-10) {
            ++failures;
            continue;
        }
        int mc = 0;
        double mm = 0;
        for (int k = 0; k < 4; ++k)
            if (std::abs(p.coords[static_cast<std::size_t>(k)]) > mm) {
                mm = std::abs(p.coords[static_cast<std::size_t>(k)]);
                mc = k;
            }
        p.chart = ChartId(mc, 4);
        out.push_back(p);
    }
    return out;
}

/// Tangent frame at a surface point, expressed in a chart's affine
/// coordinates. The pivot is the max-modulus chart-local partial; V1, V2 span
/// the tangent plane with unit entries in the non-pivot slots and phi1, phi2
/// are the dual covectors of the alpha-formula.
struct TangentFrame {
    SurfacePointNum base;
    ChartId chart;
    int pivot;  // chart-local index 0..2
    std::array<Complex, 3> V1{}, V2{};
    std::array<Complex, 3> phi1{}, phi2{};
    double alpha = 0;
    double theta1 = 0;
    double S = 0;
    Complex f_pivot;
};

inline std::array<Complex, 3> chart_affine(const SurfacePointNum& p, ChartId chart) {
    Complex piv = p.coords[static_cast<std::size_t>(chart.i)];
    double mx = 0;
    for (const auto& c : p.coords) mx = std::max(mx, std::abs(c));
    if (std::abs(piv) <= 1e-12 * mx)
        throw std::domain_error("chart_affine: point not in requested chart");
    std::array<Complex, 3> u;
    std::size_t v = 0;
    for (int j = 0; j < 4; ++j)
        if (j != chart.i) u[v++] = p.coords[static_cast<std::size_t>(j)] / piv;
    return u;
}

inline TangentFrame tangent_frame_in_chart(const QuarticSurface& X, const SurfacePointNum& p,
                                           ChartId chart) {
    std::array<Complex, 3> u = chart_affine(p, chart);
    std::vector<Complex> uv(u.begin(), u.end());
    std::array<Complex, 3> g;
    double scale = 0;
    for (int k = 0; k < 3; ++k) {
        g[static_cast<std::size_t>(k)] = X.chart_partial_num(chart.i, k).evaluate(uv);
        scale = std::max(scale, X.chart_partial_num(chart.i, k).max_coeff_abs());
    }
    int piv = 0;
    double pm = std::abs(g[0]);
    for (int k = 1; k < 3; ++k)
        if (std::abs(g[static_cast<std::size_t>(k)]) > pm) {
            pm = std::abs(g[static_cast<std::size_t>(k)]);
            piv = k;
        }
    if (pm <= 1e-12 * std::max(1.0, scale))
        throw std::domain_error("tangent_frame: all chart partials vanish (singular point?)");
    // non-pivot slots in the chart's wedge order (cyclic on even charts,
    // reversed on odd ones) so the frame pair pairs to +1 with the form
    int a = (piv + 1) % 3, b = (piv + 2) % 3;
    if (chart.i % 2 == 1) std::swap(a, b);
    Complex ra = g[static_cast<std::size_t>(a)] / g[static_cast<std::size_t>(piv)];
    Complex rb = g[static_cast<std::size_t>(b)] / g[static_cast<std::size_t>(piv)];

    TangentFrame fr;
    fr.base = p;
    fr.chart = chart;
    fr.pivot = piv;
    fr.f_pivot = g[static_cast<std::size_t>(piv)];
    fr.V1[static_cast<std::size_t>(piv)] = -ra;
    fr.V1[static_cast<std::size_t>(a)] = 1;
    fr.V2[static_cast<std::size_t>(piv)] = -rb;
    fr.V2[static_cast<std::size_t>(b)] = 1;
    double na = std::norm(ra), nb = std::norm(rb);
    fr.alpha = 1.0 / (1.0 + na + nb);
    fr.S = 1.0 + na + nb;
    fr.theta1 = std::arg(fr.f_pivot);
    fr.phi1[static_cast<std::size_t>(piv)] = -std::conj(ra) * fr.alpha;
    fr.phi1[static_cast<std::size_t>(a)] = 1.0 - na * fr.alpha;
    fr.phi1[static_cast<std::size_t>(b)] = -std::conj(ra) * rb * fr.alpha;
    fr.phi2[static_cast<std::size_t>(piv)] = -std::conj(rb) * fr.alpha;
    fr.phi2[static_cast<std::size_t>(a)] = -ra * std::conj(rb) * fr.alpha;
    fr.phi2[static_cast<std::size_t>(b)] = 1.0 - nb * fr.alpha;

    // internal duality check phi^i(V_j) = delta_ij
    auto pair = [](const std::array<Complex, 3>& phi, const std::array<Complex, 3>& v) {
        return phi[0] * v[0] + phi[1] * v[1] + phi[2] * v[2];
    };
    double dev = std::max(
        std::max(std::abs(pair(fr.phi1, fr.V1) - 1.0), std::abs(pair(fr.phi2, fr.V2) - 1.0)),
        std::max(std::abs(pair(fr.phi1, fr.V2)), std::abs(pair(fr.phi2, fr.V1))));
    if (dev > 1e-8) throw std::logic_error("tangent_frame: coframe duality failed");
    return fr;
}

inline TangentFrame tangent_frame(const QuarticSurface& X, const SurfacePointNum& p) {
    return tangent_frame_in_chart(X, p, p.chart);
}

}  // namespace k3cert

#endif
