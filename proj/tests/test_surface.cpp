#include <catch2/catch.hpp>

#include "k3cert/parse.hpp"
#include "k3cert/surface.hpp"

using namespace k3cert;

namespace {
const std::vector<std::string> X4 = {"x0", "x1", "x2", "x3"};
QuarticSurface fermat_surface() { return QuarticSurface(parse_poly("x0^4+x1^4+x2^4+x3^4", X4)); }

// test-side oracle: multistart Gauss-Newton search for chart-local singular
// points of the 4-polynomial system, independent of the elimination path
bool numeric_singular_search(const QuarticSurface& X, std::uint64_t seed) {
    Rng rng(seed);
    for (int chart = 0; chart < 4; ++chart) {
        std::vector<PolyC> sys = {X.chart_eq_num(chart)};
        for (int k = 0; k < 3; ++k) sys.push_back(X.chart_partial_num(chart, k));
        for (int start = 0; start < 40; ++start) {
            std::vector<Complex> x = {rng.cgauss(), rng.cgauss(), rng.cgauss()};
            double dev = detail::polish_candidate(sys, x);
            double mag = std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
            if (dev < 1e-8 && mag < 1e3) return true;
        }
    }
    return false;
}
}  // namespace

TEST_CASE("surface membership") {
    QuarticSurface X = fermat_surface();
    SECTION("no Gaussian-rational point [1:x:0:0] lies on the Fermat quartic") {
        // x^4 = -1 has no solution in Q(i)
        std::vector<GaussRat> xs = {GaussRat(1), GaussRat(-1), GaussRat::imag_unit(),
                                    GaussRat(1, 2, 1, 1), GaussRat(-3, 5, 2, 7)};
        for (const auto& x : xs) {
            ProjPointQ p({GaussRat(1), x, GaussRat(0), GaussRat(0)});
            CHECK_FALSE(X.contains(p));
        }
    }
    SECTION("numeric point with x^4 = -1 is on the surface") {
        const double s = std::sqrt(0.5);
        ProjPointC p({{1, 0}, {s, s}, {0, 0}, {0, 0}});
        CHECK(X.contains(p));
    }
    SECTION("points with unit residual are rejected") {
        ProjPointQ p({GaussRat(1), GaussRat(0), GaussRat(0), GaussRat(0)});  // f = 1
        CHECK_FALSE(X.contains(p));
        ProjPointC pn({{1, 0}, {0, 0}, {0, 0}, {0, 0}});
        CHECK_FALSE(X.contains(pn));
    }
}

TEST_CASE("nonsingularity certification") {
    SECTION("Fermat is certified nonsingular") {
        QuarticSurface X = fermat_surface();
        auto cert = certify_nonsingular(X);
        CHECK(cert.status == SingStatus::certified_nonsingular);
        CHECK(cert.charts_checked == 4);
    }
    SECTION("x0^4+x1^4+x2^4 is singular with witness [0:0:0:1]") {
        QuarticSurface X(parse_poly("x0^4+x1^4+x2^4", X4));
        auto cert = certify_nonsingular(X);
        REQUIRE(cert.status == SingStatus::singular);
        REQUIRE(cert.witness_exact.has_value());
        CHECK(proj_equal(*cert.witness_exact,
                         ProjPointQ({GaussRat(0), GaussRat(0), GaussRat(0), GaussRat(1)})));
        // soundness: witness independently kills all five polynomials
        CHECK(X.poly().evaluate(cert.witness_exact->coords).is_zero());
        for (int v = 0; v < 4; ++v)
            CHECK(X.gradient(v).evaluate(cert.witness_exact->coords).is_zero());
    }
    SECTION("status agrees with the numeric search oracle") {
        QuarticSurface X(parse_poly("x0^3*x1 + x1^4 + x2^4 + x3^4", X4));
        auto cert = certify_nonsingular(X);
        bool found = numeric_singular_search(X, 99);
        CHECK(cert.status == SingStatus::certified_nonsingular);
        CHECK_FALSE(found);

        QuarticSurface Y(parse_poly("(x2^2 - x3^2)^2", X4));
        auto certY = certify_nonsingular(Y);
        CHECK(certY.status == SingStatus::singular);
        CHECK(numeric_singular_search(Y, 99));
    }
}

TEST_CASE("point sampling") {
    QuarticSurface X = fermat_surface();
    auto pts = sample_points(X, 100, 42);
    REQUIRE(pts.size() == 100);
    for (const auto& p : pts) {
        CHECK(p.residual <= 1e-10);
        // chart coordinate has max modulus
        double cm = std::abs(p.coords[static_cast<std::size_t>(p.chart.i)]);
        for (const auto& c : p.coords) CHECK(std::abs(c) <= cm * (1 + 1e-12));
    }
    SECTION("deterministic in the seed") {
        auto again = sample_points(X, 100, 42);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            CHECK(pts[k].coords == again[k].coords);
            CHECK(pts[k].residual == again[k].residual);
        }
        auto other = sample_points(X, 100, 43);
        CHECK(pts[0].coords != other[0].coords);
    }
}

TEST_CASE("tangent frames") {
    QuarticSurface X = fermat_surface();
    certify_nonsingular(X);
    auto pts = sample_points(X, 100, 7);
    for (const auto& p : pts) {
        TangentFrame fr;
        REQUIRE_NOTHROW(fr = tangent_frame(X, p));  // never errors on a certified surface
        std::array<Complex, 3> ua = chart_affine(p, fr.chart);
        std::vector<Complex> u(ua.begin(), ua.end());
        std::array<Complex, 3> g;
        double gm = 0;
        for (int k = 0; k < 3; ++k) {
            g[static_cast<std::size_t>(k)] = X.chart_partial_num(fr.chart.i, k).evaluate(u);
            gm = std::max(gm, std::abs(g[static_cast<std::size_t>(k)]));
        }
        // tangency: grad . V_k = 0
        Complex t1 = g[0] * fr.V1[0] + g[1] * fr.V1[1] + g[2] * fr.V1[2];
        Complex t2 = g[0] * fr.V2[0] + g[1] * fr.V2[1] + g[2] * fr.V2[2];
        CHECK(std::abs(t1) <= 1e-10 * gm);
        CHECK(std::abs(t2) <= 1e-10 * gm);
        // duality
        auto pair = [](const std::array<Complex, 3>& phi, const std::array<Complex, 3>& v) {
            return phi[0] * v[0] + phi[1] * v[1] + phi[2] * v[2];
        };
        CHECK(std::abs(pair(fr.phi1, fr.V1) - 1.0) <= 1e-10);
        CHECK(std::abs(pair(fr.phi2, fr.V2) - 1.0) <= 1e-10);
        CHECK(std::abs(pair(fr.phi1, fr.V2)) <= 1e-10);
        CHECK(std::abs(pair(fr.phi2, fr.V1)) <= 1e-10);
        // alpha = 1/S with S the pivot-relative gradient norm ratio
        double S = (std::norm(g[0]) + std::norm(g[1]) + std::norm(g[2])) /
                   std::norm(g[static_cast<std::size_t>(fr.pivot)]);
        CHECK(fr.alpha == Approx(1.0 / S).epsilon(1e-12));
        CHECK(fr.S == Approx(S).epsilon(1e-12));
        CHECK(fr.theta1 == std::arg(fr.f_pivot));
    }
    SECTION("frame structure when the pivot is the first variable") {
        // in an even chart with pivot 0, V1 = (-g1/g0, 1, 0), V2 = (-g2/g0, 0, 1)
        for (const auto& p : pts) {
            TangentFrame fr = tangent_frame(X, p);
            if (fr.pivot != 0 || fr.chart.i % 2 != 0) continue;
            CHECK(fr.V1[1] == Complex(1, 0));
            CHECK(fr.V1[2] == Complex(0, 0));
            CHECK(fr.V2[1] == Complex(0, 0));
            CHECK(fr.V2[2] == Complex(1, 0));
            break;
        }
    }
    SECTION("near-singular points are rejected") {
        QuarticSurface Y(parse_poly("x0^4+x1^4+x2^4", X4));
        SurfacePointNum bad;
        bad.coords = {1e-9, 1e-9, 1e-9, 1.0};  // near the singular point [0:0:0:1]
        bad.chart = ChartId(3, 4);
        bad.residual = 0;
        CHECK_THROWS_AS(tangent_frame(Y, bad), std::domain_error);
    }
}
