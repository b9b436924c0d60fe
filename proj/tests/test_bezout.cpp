#include <catch2/catch.hpp>

#include "k3cert/bezout.hpp"
#include "k3cert/parse.hpp"

using namespace k3cert;

namespace {
const std::vector<std::string> XYZ = {"x", "y", "z"};
const std::vector<std::string> UZZ = {"u", "z2", "z3"};
const std::vector<std::string> X4 = {"x0", "x1", "x2", "x3"};

PlaneCurve curve(const std::string& s, const std::vector<std::string>& vars = XYZ) {
    return PlaneCurve(parse_poly(s, vars));
}

bool near_point(const ProjPointC& p, std::initializer_list<double> want, double tol = 1e-8) {
    std::vector<Complex> w;
    for (double x : want) w.emplace_back(x, 0);
    return proj_equal(p, ProjPointC{w}, tol);
}
}  // namespace

TEST_CASE("common components") {
    CHECK(common_component(curve("x*(x+y+z)"), curve("y*(x+y+z)")).has_value());
    PolyQ shared = common_component(curve("x*(x+y+z)"), curve("y*(x+y+z)"))->poly;
    CHECK(normalize_leading(shared) == normalize_leading(parse_poly("x+y+z", XYZ)));
    CHECK_FALSE(common_component(curve("4*z2^3", UZZ), curve("4*z3^3", UZZ)).has_value());

    Rng rng(3);
    int done = 0;
    while (done < 20) {
        PolyQ a = rng.random_homogeneous(3, 1 + rng.raw() % 3);
        PolyQ b = rng.random_homogeneous(3, 1 + rng.raw() % 3);
        if (a.degree() < 1 || b.degree() < 1) continue;
        if (!gcd_poly(a, b).is_constant()) continue;  // exceedingly rare
        CHECK_FALSE(common_component(PlaneCurve(a), PlaneCurve(b)).has_value());
        ++done;
    }
}

TEST_CASE("intersection counting") {
    SECTION("two lines meet once") {
        IntersectionReport rep = intersect(curve("x"), curve("y"));
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].multiplicity == 1);
        CHECK(rep.total == 1);
        CHECK(near_point(rep.points[0].point, {0, 0, 1}));
        REQUIRE(rep.points[0].point_exact.has_value());
        CHECK(proj_equal(*rep.points[0].point_exact,
                         ProjPointQ({GaussRat(0), GaussRat(0), GaussRat(1)})));
    }
    SECTION("conic tangent to a line counts twice") {
        IntersectionReport rep = intersect(curve("y*z - x^2"), curve("y"));
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].multiplicity == 2);
        CHECK(rep.total == 2);
        CHECK(near_point(rep.points[0].point, {0, 0, 1}));
    }
    SECTION("the two cubic slice partials meet with multiplicity nine") {
        IntersectionReport rep = intersect(curve("4*z2^3", UZZ), curve("4*z3^3", UZZ));
        REQUIRE(rep.points.size() == 1);
        CHECK(rep.points[0].multiplicity == 9);
        CHECK(rep.total == 9);
        CHECK(near_point(rep.points[0].point, {1, 0, 0}));
    }
    SECTION("shared components are reported, not counted") {
        IntersectionReport rep = intersect(curve("x*y"), curve("x*z"));
        CHECK(rep.common_component_poly.has_value());
        CHECK(rep.points.empty());
    }
}

TEST_CASE("Bezout exactness on random coprime pairs") {
    Rng rng(7);
    int done = 0;
    while (done < 20) {
        int n = 1 + static_cast<int>(rng.raw() % 4);
        int m = 1 + static_cast<int>(rng.raw() % 4);
        PolyQ a = rng.random_homogeneous(3, static_cast<unsigned>(n), 0.7, 4, false);
        PolyQ b = rng.random_homogeneous(3, static_cast<unsigned>(m), 0.7, 4, false);
        if (a.degree() != n || b.degree() != m) continue;
        if (!gcd_poly(a, b).is_constant()) continue;
        IntersectionReport rep = intersect(PlaneCurve(a), PlaneCurve(b), 1000 + done);
        int total = 0;
        for (const auto& ip : rep.points) total += ip.multiplicity;
        CHECK(total == n * m);
        CHECK(rep.total == n * m);
        ++done;
    }
}

TEST_CASE("full-degree products stay exact") {
    Rng rng(5);
    int done = 0;
    while (done < 3) {
        PolyQ a = rng.random_homogeneous(3, 4, 0.7, 4, false);
        PolyQ b = rng.random_homogeneous(3, 4, 0.7, 4, false);
        if (a.degree() != 4 || b.degree() != 4) continue;
        if (!gcd_poly(a, b).is_constant()) continue;
        IntersectionReport rep = intersect(PlaneCurve(a), PlaneCurve(b), 123 + done);
        CHECK(rep.total == 16);
        ++done;
    }
}

TEST_CASE("intersection points are coordinate-change invariant") {
    PlaneCurve a = curve("x^2 + y*z - z^2");
    PlaneCurve b = curve("x + y - z");
    IntersectionReport r1 = intersect(a, b, 11);
    IntersectionReport r2 = intersect(a, b, 977);
    REQUIRE(r1.points.size() == r2.points.size());
    for (const auto& p : r1.points) {
        bool matched = false;
        for (const auto& q : r2.points)
            matched = matched ||
                      (p.multiplicity == q.multiplicity && proj_equal(p.point, q.point, 1e-8));
        CHECK(matched);
    }
}

TEST_CASE("slice curve construction") {
    PolyQ fermat = parse_poly("x0^4+x1^4+x2^4+x3^4", X4);
    SECTION("Fermat at sigma = 1") {
        CDETriple<GaussRat> t = build_CDE(fermat, GaussRat(1));
        CHECK(t.chom == parse_poly("2*u^4 + z2^4 + z3^4", UZZ));
        CHECK(t.dhom == parse_poly("4*z2^3", UZZ));
        CHECK(t.ehom == parse_poly("4*z3^3", UZZ));
        CHECK(t.degrees == std::array<int, 3>{4, 3, 3});
    }
    SECTION("missing variables lower the reported degrees") {
        PolyQ f = parse_poly("x0^4+x1^4+x2^4", X4);
        CDETriple<GaussRat> t = build_CDE(f, GaussRat(2));
        CHECK(t.degrees == std::array<int, 3>{4, 3, -1});  // the z3 partial vanishes
        CHECK(t.gz3.is_zero());
    }
    SECTION("substitution commutes with differentiation") {
        Rng rng(13);
        for (int k = 0; k < 6; ++k) {
            PolyQ f = rng.random_homogeneous(4, 4);
            GaussRat sigma = rng.small_gauss_rat();
            PolyQ fhat = dehomogenize(f, 0);
            CDETriple<GaussRat> t;
            try {
                t = build_CDE(f, sigma);
            } catch (const std::domain_error&) {
                continue;  // slice inside the surface
            }
            CHECK(t.gz2 == fhat.derivative(1).substitute_const(0, sigma));
            CHECK(t.gz3 == fhat.derivative(2).substitute_const(0, sigma));
        }
    }
    SECTION("degenerate slices are rejected") {
        PolyQ f = parse_poly("x1*(x0^3+x1^3+x2^3+x3^3)", X4);
        CHECK_THROWS_AS(build_CDE(f, GaussRat(0)), std::domain_error);
    }
}

TEST_CASE("finiteness of the slice-curve triple") {
    PolyQ fermat = parse_poly("x0^4+x1^4+x2^4+x3^4", X4);
    SECTION("Fermat with exact slices: empty common locus") {
        Rng rng(17);
        for (int k = 0; k < 10; ++k) {
            GaussRat sigma = rng.small_gauss_rat();
            CDEVerdict v = cde_finiteness(fermat, sigma, 100 + k);
            CHECK(v.kind == CDEVerdict::Kind::finite);
            CHECK(v.points.empty());  // 1 + sigma^4 = 0 has no exact solution
        }
    }
    SECTION("Fermat at the eighth root of unity: exactly the distinguished point") {
        const Complex sigma = std::polar(1.0, M_PI / 4.0);
        CDEVerdict v = cde_finiteness(fermat, sigma, 5);
        REQUIRE(v.kind == CDEVerdict::Kind::finite);
        REQUIRE(v.points.size() == 1);
        CHECK(near_point(v.points[0].point, {1, 0, 0}));
        // the distinguished point is the image of the explicit map on the
        // locus where both slice partials vanish: h(z1, 0) = [z1 : s z1 : 0 : 0]
        ProjPointC lifted{{v.points[0].point.coords[0], sigma * v.points[0].point.coords[0],
                           v.points[0].point.coords[1], v.points[0].point.coords[2]}};
        ProjPointC h_image{{Complex(1, 0), sigma, Complex(0, 0), Complex(0, 0)}};
        CHECK(proj_equal(lifted, h_image, 1e-8));
    }
    SECTION("no singular branch on certified surfaces") {
        std::vector<std::string> certified = {
            "x0^4+x1^4+x2^4+x3^4",
            "x0^3*x1 + x1^4 + x2^4 + x3^4",
            "x0^4 + 2*x1^4 + 3*x2^4 + x3^4",
            "x0^4 + x1^4 + x2^3*x3 + x3^4",
        };
        Rng rng(23);
        for (const auto& s : certified) {
            PolyQ f = parse_poly(s, X4);
            QuarticSurface X(f);
            REQUIRE(certify_nonsingular(X).status == SingStatus::certified_nonsingular);
            for (int k = 0; k < 3; ++k) {
                GaussRat sigma = rng.small_gauss_rat();
                try {
                    CDEVerdict v = cde_finiteness(f, sigma, 31 + k);
                    CHECK(v.kind == CDEVerdict::Kind::finite);
                } catch (const std::domain_error&) {
                    // slice inside the surface cannot happen for nonsingular f
                    FAIL("degenerate slice on a certified surface");
                }
            }
        }
    }
    SECTION("a pair sharing a component is skipped, not counted") {
        // g = z2^4 + z2^2 z3^2 + 1: the two partials share the factor z2,
        // the slice curve is coprime to both, and the only common point of
        // all three is where the slice plane meets the surface's singular
        // line at infinity
        PolyQ f = parse_poly("x2^4 + x2^2*x3^2 + x0^4", X4);
        CDEVerdict v = cde_finiteness(f, GaussRat(1), 77);
        REQUIRE(v.kind == CDEVerdict::Kind::finite);
        CHECK(v.pair_used == "CD");
        REQUIRE(v.points.size() == 1);
        CHECK(near_point(v.points[0].point, {0, 0, 1}));
    }
    SECTION("singular branch with an exact witness") {
        PolyQ f = parse_poly("(x2^2 - x3^2)^2", X4);
        CDEVerdict v = cde_finiteness(f, GaussRat(1), 41);
        REQUIRE(v.kind == CDEVerdict::Kind::singular_branch);
        CHECK(v.witness_verified);
        REQUIRE(v.witness.has_value());
        // independently kill all five singularity polynomials
        std::vector<Complex> w(v.witness->coords.begin(), v.witness->coords.end());
        CHECK(std::abs(f.to_numeric().evaluate(w)) <= 1e-8);
        for (int d = 0; d < 4; ++d)
            CHECK(std::abs(f.derivative(d).to_numeric().evaluate(w)) <= 1e-8);
    }
    SECTION("singular branch via the slice plane's line at infinity") {
        PolyQ f = parse_poly("x0^4+x1^4+x2^4", X4);
        const Complex sigma = std::polar(1.0, M_PI / 4.0);  // makes 1 + sigma^4 = 0
        CDEVerdict v = cde_finiteness(f, sigma, 43);
        REQUIRE(v.kind == CDEVerdict::Kind::singular_branch);
        CHECK(v.witness_verified);
        REQUIRE(v.witness.has_value());
        CHECK(near_point(*v.witness, {0, 0, 0, 1}));
    }
}
