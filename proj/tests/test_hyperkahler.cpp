#include <catch2/catch.hpp>

#include "k3cert/hyperkahler.hpp"
#include "k3cert/rng.hpp"

using namespace k3cert;

namespace {

TangentFrame synthetic_frame(double S, double f1abs, double theta1 = 0) {
    TangentFrame fr;
    fr.S = S;
    fr.alpha = 1.0 / S;
    fr.f_pivot = std::polar(f1abs, theta1);
    fr.theta1 = theta1;
    return fr;
}

HKParams random_params(Rng& rng) {
    Complex tau = rng.cgauss();
    double lambda = std::exp(0.5 * rng.gauss());
    double rho = std::exp(0.3 * rng.gauss());
    double theta = rng.uniform(-M_PI, M_PI);
    return HKParams::solved(rho, lambda, tau, theta);
}

}  // namespace

TEST_CASE("metric construction") {
    SECTION("flat case gives the identity") {
        HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
        MetricAtPoint m = build_metric(p, synthetic_frame(1.0, 1.0));
        CHECK(m.h11 == Complex(1, 0));
        CHECK(m.h12 == Complex(0, 0));
        CHECK(m.h22 == Complex(1, 0));
        CHECK(m.hermitian());
        CHECK(m.positive_definite());
    }
    SECTION("determinant collapses through the constraint") {
        Rng rng(5);
        for (int t = 0; t < 200; ++t) {
            HKParams p = random_params(rng);
            double S = 1.0 + std::abs(rng.gauss());
            double f1 = 0.2 + std::abs(rng.gauss());
            MetricAtPoint m = build_metric(p, synthetic_frame(S, f1, rng.uniform(-M_PI, M_PI)));
            double c = p.rho * S / (2 * f1);
            CHECK(m.det().real() == Approx(c * c).epsilon(1e-10));
            CHECK(std::abs(m.det().imag()) <= 1e-12 * c * c);
        }
    }
    SECTION("Hermitian positivity for random valid parameters") {
        Rng rng(7);
        for (int t = 0; t < 1000; ++t) {
            HKParams p = random_params(rng);
            MetricAtPoint m = build_metric(p, synthetic_frame(1.7, 0.9, 0.3));
            CHECK(m.hermitian());
            CHECK(m.positive_definite());
        }
    }
    SECTION("constraint violations are rejected") {
        HKParams bad{2.0, 1.0, 2.0, Complex(0, 0), 0.0};  // lambda*mu = 2 != 1
        CHECK_THROWS_AS(bad.validate(), std::domain_error);
        CHECK_THROWS_AS(build_metric(bad, synthetic_frame(1, 1)), std::domain_error);
    }
}

TEST_CASE("complex-structure triple") {
    SECTION("hand realification in the flat case") {
        HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
        JTriple t = build_Jtriple(p);
        Mat4 expect;
        expect << 0, 0, -1, 0,
            0, 0, 0, 1,
            1, 0, 0, 0,
            0, -1, 0, 0;
        CHECK((t.J2 - expect).cwiseAbs().maxCoeff() == 0.0);
        Mat4 j1;
        j1 << 0, -1, 0, 0,
            1, 0, 0, 0,
            0, 0, 0, -1,
            0, 0, 1, 0;
        CHECK((t.J1 - j1).cwiseAbs().maxCoeff() == 0.0);
        // multiplication by i squares to minus the identity exactly
        CHECK((t.J1 * t.J1 + Mat4::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("quaternion relations and metric compatibility, 1000 draws") {
        Rng rng(11);
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            HKParams p = random_params(rng);
            JTriple j = build_Jtriple(p);
            MetricAtPoint m = build_metric(p, synthetic_frame(1.0 + std::abs(rng.gauss()),
                                                              0.3 + std::abs(rng.gauss()),
                                                              p.theta1));
            worst = std::max(worst, check_quaternion(j, m));
        }
        CHECK(worst <= 1e-12);
    }
    SECTION("detectable failures") {
        HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
        JTriple t = build_Jtriple(p);
        JTriple flipped = t;
        flipped.J1 = -t.J1;
        CHECK(check_quaternion(flipped) >= 2.0 - 1e-12);
        JTriple ident{Mat4::Identity(), Mat4::Identity(), Mat4::Identity()};
        CHECK(check_quaternion(ident) == Approx(2.0));
    }
}

TEST_CASE("angle identity") {
    CHECK(angle_identity_residual({0, M_PI / 2, M_PI / 2}) <= 1e-15);
    CHECK(angle_identity_residual({M_PI / 3, M_PI / 3, M_PI / 4}) <= 1e-15);
    CHECK(angle_identity_residual({0, 0, M_PI / 2}) == Approx(1.0));
}

TEST_CASE("angle matrices") {
    SECTION("block-diagonal example") {
        JTriple t = angle_matrices({M_PI / 2, 0, M_PI / 2});
        Mat4 expect;
        expect << 0, 1, 0, 0,
            -1, 0, 0, 0,
            0, 0, 0, 1,
            0, 0, -1, 0;
        CHECK((t.J2 - expect).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SECTION("valid triples pass the quaternion checks") {
        Rng rng(13);
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            double a1 = rng.uniform(0.05, M_PI - 0.05);
            double phi = rng.uniform(0, 2 * M_PI);
            double s1 = std::sin(a1);
            KahlerAngles ang{a1, std::acos(s1 * std::cos(phi)), std::acos(s1 * std::sin(phi))};
            REQUIRE(angle_identity_residual(ang) <= 1e-12);
            worst = std::max(worst, check_quaternion(angle_matrices(ang)));
        }
        CHECK(worst <= 1e-12);
    }
    SECTION("violating triples fail by a proportional margin") {
        Rng rng(17);
        for (int t = 0; t < 200; ++t) {
            double a1 = rng.uniform(0.1, M_PI - 0.1);
            double phi = rng.uniform(0, 2 * M_PI);
            double s1 = std::sin(a1);
            KahlerAngles ang{a1, std::acos(s1 * std::cos(phi)), std::acos(s1 * std::sin(phi))};
            double delta = rng.uniform(1e-3, 0.2);
            KahlerAngles bad = ang;
            bad.a2 = std::acos(std::clamp(std::cos(ang.a2) + delta, -1.0, 1.0));
            double violation = angle_identity_residual(bad);
            if (violation < 1e-3) continue;
            CHECK(check_quaternion(angle_matrices(bad)) >= violation / 10.0);
        }
    }
    SECTION("degenerate frame is refused") {
        CHECK_THROWS_AS(angle_matrices({0.0, M_PI / 2, M_PI / 2}), std::domain_error);
    }
}

TEST_CASE("intertwining equation residuals") {
    HKParams p = HKParams::solved(2.0, 1.3, Complex(0.4, -0.7), 0.9);
    SECTION("zero data has zero residual") {
        RotationMatrix A = RotationMatrix::identity();
        S2Point x{{0, 0, 1}};
        CHECK(triholo_residual(A, x, p, {}) == 0.0);
    }
    SECTION("holomorphic data must vanish when the rotation rows decouple") {
        RotationMatrix A = RotationMatrix::identity();
        S2Point x{{1, 0, 0}};  // factor 1 + a1.x = 2, a2.x = a3.x = 0
        DiskDerivatives d;
        d.dphi2 = Complex(0.3, 0.1);
        d.dphi3 = Complex(-0.2, 0.5);
        double expected = 2.0 * std::max(std::abs(d.dphi2), std::abs(d.dphi3));
        CHECK(triholo_residual(A, x, p, d) == Approx(expected));
    }
    SECTION("solved data has residual at machine scale") {
        Rng rng(19);
        for (int t = 0; t < 100; ++t) {
            HKParams q = HKParams::solved(std::exp(0.3 * rng.gauss()),
                                          std::exp(0.5 * rng.gauss()), rng.cgauss(),
                                          rng.uniform(-M_PI, M_PI));
            RotationMatrix A{rng.so3()};
            A.validate(1e-12);
            S2Point x{rng.unit_sphere()};
            x.validate(1e-12);
            if (std::abs(1.0 + A.row_dot(0, x.x)) < 1e-3) continue;
            DiskDerivatives d = solve_triholo(A, x, q, rng.cgauss(), rng.cgauss());
            CHECK(triholo_residual(A, x, q, d) <= 1e-12);
        }
    }
    SECTION("degenerate factor is refused") {
        RotationMatrix A = RotationMatrix::identity();
        S2Point x{{-1, 0, 0}};
        CHECK_THROWS_AS(triholo_residual(A, x, p, {}), std::domain_error);
    }
}

TEST_CASE("angle formulas from the pullback identities") {
    SECTION("axis example") {
        RotationMatrix A = RotationMatrix::identity();
        S2Point x{{0, 0, 1}};
        HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
        double S = 1.0;
        DiskDerivatives d = solve_triholo(A, x, p, Complex(0.5, 0), Complex(0.2, 0.1));
        KahlerAngles ang = angles_from_pullback(A, x, p, S, d);
        CHECK(std::cos(ang.a1) == Approx(0.0).margin(1e-15));
        CHECK(std::cos(ang.a2) == Approx(0.0).margin(1e-15));
        CHECK(std::cos(ang.a3) == Approx(-1.0));  // -2/(rho S) = -1
    }
    SECTION("identity holds iff rho*S = 2") {
        Rng rng(23);
        int done = 0;
        while (done < 100) {
            RotationMatrix A{rng.so3()};
            S2Point x{rng.unit_sphere()};
            double a1x = A.row_dot(0, x.x);
            if (a1x * a1x > 0.9) continue;  // avoid the aligned sliver
            double rho = std::exp(0.3 * rng.gauss());
            double S = 2.0 / rho;
            auto c = kahler_cosines(A, x, rho, S);
            CHECK(cos_identity_residual(c[0], c[1], c[2]) <= 1e-10);
            double bump = rng.uniform01() < 0.5 ? 1.01 : 0.99;
            auto cb = kahler_cosines(A, x, rho, S * bump);
            CHECK(cos_identity_residual(cb[0], cb[1], cb[2]) >= 1e-3);
            ++done;
        }
    }
    SECTION("branch points are refused") {
        RotationMatrix A = RotationMatrix::identity();
        S2Point x{{0, 0, 1}};
        HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
        DiskDerivatives zero{};
        CHECK_THROWS_AS(angles_from_pullback(A, x, p, 1.0, zero), std::domain_error);
    }
}

TEST_CASE("S-constancy sweep on the Fermat quartic") {
    const std::vector<std::string> X4 = {"x0", "x1", "x2", "x3"};
    QuarticSurface X(parse_poly("x0^4+x1^4+x2^4+x3^4", X4));
    auto pts = sample_points(X, 100, 31);
    HKParams p = HKParams::solved(2.0, 1.0, Complex(0, 0), 0.0);
    SConstancyReport rep = s_constancy_witness(X, p, pts);
    CHECK(rep.samples == 100);
    CHECK(rep.min_S >= 1.0);         // S is never below one
    CHECK(rep.min_S > 1.0 + 1e-6);   // generic samples sit strictly above
    CHECK(rep.locus_by_ratio == 0);  // rho*S = 2 never holds generically
    CHECK(rep.locus_by_partials == 0);
    CHECK(rep.consistent);
}

TEST_CASE("the eighth-root coefficient ring") {
    Cyc4 w = Cyc4::omega();
    Cyc4 w4 = w * w * w * w;
    CHECK(w4 == -Cyc4(GaussRat(1)));  // the rewrite rule
    CHECK((w4 * w4) == Cyc4(GaussRat(1)));
    CHECK(std::abs(w.to_complex() - std::polar(1.0, M_PI / 4.0)) <= 1e-15);
    Cyc4 a = w + Cyc4(GaussRat(2));
    Cyc4 b = Cyc4::omega(3) - Cyc4(GaussRat(1, 3, 1, 1));
    CHECK(a * b == b * a);
    CHECK(std::abs((a * b).to_complex() - a.to_complex() * b.to_complex()) <= 1e-14);
}

TEST_CASE("exact verification of the explicit map into the Fermat quartic") {
    HMapReport rep = verify_map_h();
    CHECK(rep.composition_zero);
    CHECK(rep.holomorphic);
    CHECK(rep.origin_singular);
    CHECK(rep.first_coord_ratio == "omega");
    CHECK(rep.image_residual <= 1e-14);
}
