// A short tour of the library on the Fermat quartic: certify, sample,
// inspect the form across charts, and slice.

#include <iostream>

#include "k3cert/bezout.hpp"
#include "k3cert/parse.hpp"
#include "k3cert/symplectic.hpp"

using namespace k3cert;

int main() {
    PolyQ f = parse_poly("x0^4+x1^4+x2^4+x3^4", {"x0", "x1", "x2", "x3"});
    QuarticSurface X(f);

    auto cert = certify_nonsingular(X);
    std::cout << "surface status: " << to_string(cert.status) << "\n";

    auto pts = sample_points(X, 5, 2024);
    for (const auto& p : pts) {
        TangentFrame fr = tangent_frame(X, p);
        Complex omega = omega_eval(X, p, fr.V1, fr.V2).value;
        std::cout << "point in chart " << fr.chart.i << ": S = " << fr.S
                  << ", |omega(V1,V2)| = " << std::abs(omega)
                  << ", pivot agreement dev = " << pivot_consistency(X, p) << "\n";
    }

    auto rep = intersect(PlaneCurve(parse_poly("y*z - x^2", {"x", "y", "z"})),
                         PlaneCurve(parse_poly("y", {"x", "y", "z"})));
    std::cout << "conic meets its tangent with multiplicity "
              << rep.points.at(0).multiplicity << "\n";

    CDEVerdict v = cde_finiteness(f, GaussRat(1));
    std::cout << "slice at z1 = 1: "
              << (v.kind == CDEVerdict::Kind::finite ? "finite" : "singular branch")
              << " with " << v.points.size() << " common points\n";
    return 0;
}
