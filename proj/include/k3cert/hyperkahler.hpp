#ifndef K3CERT_HYPERKAHLER_HPP
#define K3CERT_HYPERKAHLER_HPP

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>

#include "k3cert/cyclotomic.hpp"
#include "k3cert/parse.hpp"
#include "k3cert/surface.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// Parametrized hyperkahler data at a surface point. The three complex
// structures act on the real tangent plane spanned by the frame pair; they
// are stored as realified 4x4 matrices in the basis
// (Re xi1, Im xi1, Re xi2, Im xi2) of frame coefficients, which turns every
// quaternion and compatibility check into plain matrix arithmetic.
// ---------------------------------------------------------------------------

struct HKParams {
    double rho;     // positive scale
    double lambda;  // positive
    double mu;      // positive, lambda*mu = |tau|^2 + 1
    Complex tau;
    double theta1;  // principal-branch argument of the pivot partial

    void validate() const {
        if (!(rho > 0) || !(lambda > 0) || !(mu > 0))
            throw std::domain_error("HKParams: scales must be positive");
        double want = std::norm(tau) + 1.0;
        if (std::abs(lambda * mu - want) > 1e-12 * std::max(1.0, want))
            throw std::domain_error("HKParams: lambda*mu != |tau|^2 + 1");
    }

    /// Solve the constraint for mu.
    static HKParams solved(double rho, double lambda, Complex tau, double theta1) {
        HKParams p{rho, lambda, (std::norm(tau) + 1.0) / lambda, tau, theta1};
        p.validate();
        return p;
    }
};

struct MetricAtPoint {
    Complex h11, h12, h21, h22;  // Hermitian 2x2 in the frame coframe
    double S;
    double f1abs;

    bool hermitian(double tol = 1e-12) const {
        return std::abs(h21 - std::conj(h12)) <= tol * std::max(1.0, std::abs(h12)) &&
               std::abs(h11.imag()) <= tol * std::max(1.0, std::abs(h11)) &&
               std::abs(h22.imag()) <= tol * std::max(1.0, std::abs(h22));
    }
    bool positive_definite() const {
        return h11.real() > 0 && (h11 * h22 - h12 * h21).real() > 0;
    }
    Complex det() const { return h11 * h22 - h12 * h21; }
};

using Mat4 = Eigen::Matrix4d;

struct JTriple {
    Mat4 J1, J2, J3;
};

/// Metric coefficients of the parametrized family at a frame point.
inline MetricAtPoint build_metric(const HKParams& params, const TangentFrame& frame) {
    params.validate();
    MetricAtPoint m;
    m.S = frame.S;
    m.f1abs = std::abs(frame.f_pivot);
    double c = params.rho * m.S / (2.0 * m.f1abs);
    Complex e1(std::cos(params.theta1), std::sin(params.theta1));
    m.h11 = c * params.lambda;
    m.h12 = -c * params.tau * e1;
    m.h21 = std::conj(m.h12);
    m.h22 = c * params.mu;
    return m;
}

namespace detail {

/// Realify a complex-linear map xi -> A xi of C^2.
inline Mat4 realify_linear(const std::array<std::array<Complex, 2>, 2>& a) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double x = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
            double y = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].imag();
            r(2 * i, 2 * j) = x;
            r(2 * i, 2 * j + 1) = -y;
            r(2 * i + 1, 2 * j) = y;
            r(2 * i + 1, 2 * j + 1) = x;
        }
    return r;
}

/// Realify an anti-linear map xi -> M conj(xi) of C^2.
inline Mat4 realify_antilinear(const std::array<std::array<Complex, 2>, 2>& m) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double x = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].real();
            double y = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].imag();
            r(2 * i, 2 * j) = x;
            r(2 * i, 2 * j + 1) = y;
            r(2 * i + 1, 2 * j) = y;
            r(2 * i + 1, 2 * j + 1) = -x;
        }
    return r;
}

inline double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace detail

/// The complex-structure triple of the parametrized family: J1 is
/// multiplication by i; J2 is the anti-linear frame action
///   V1 -> tau conj(V1) + lambda e^{-i theta} conj(V2),
///   V2 -> -mu e^{-i theta} conj(V1) - conj(tau) e^{-2 i theta} conj(V2);
/// J3 = J1 J2.
inline JTriple build_Jtriple(const HKParams& params) {
    params.validate();
    Complex e(std::cos(params.theta1), std::sin(params.theta1));
    JTriple t;
    t.J1 = detail::realify_linear({{{Complex(0, 1), Complex(0, 0)},
                                    {Complex(0, 0), Complex(0, 1)}}});
    // coefficient action on (xi1, xi2): J2 xi = M conj(xi)
    std::array<std::array<Complex, 2>, 2> m = {
        {{std::conj(params.tau), -params.mu * e},
         {params.lambda * e, -params.tau * e * e}}};
    t.J2 = detail::realify_antilinear(m);
    t.J3 = t.J1 * t.J2;
    return t;
}

/// Real Gram matrix of h = 2 Re sum h_{ij} phi^i conj(phi^j) in the realified
/// frame basis.
inline Mat4 gram_matrix(const MetricAtPoint& m) {
    std::array<std::array<Complex, 2>, 2> h = {{{m.h11, m.h12}, {m.h21, m.h22}}};
    std::array<std::array<Complex, 2>, 4> basis = {{{Complex(1, 0), Complex(0, 0)},
                                                    {Complex(0, 1), Complex(0, 0)},
                                                    {Complex(0, 0), Complex(1, 0)},
                                                    {Complex(0, 0), Complex(0, 1)}}};
    Mat4 g;
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            Complex acc(0, 0);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    acc += h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                           basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                           std::conj(
                               basis[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]);
            g(k, l) = 2.0 * acc.real();
        }
    return g;
}

/// Max deviation over the four quaternion relations plus metric
/// compatibility, each residual measured relative to the natural scale of
/// its relation, floored at one (so unit-scale failures read as absolute
/// gaps: swapping a sign reports 2).
inline double check_quaternion(const JTriple& t, const Mat4& gram) {
    const Mat4 id = Mat4::Identity();
    double n1 = detail::max_abs(t.J1), n2 = detail::max_abs(t.J2), n3 = detail::max_abs(t.J3);
    double dev = 0;
    dev = std::max(dev, detail::max_abs(t.J1 * t.J1 + id) / std::max(1.0, n1 * n1));
    dev = std::max(dev, detail::max_abs(t.J2 * t.J2 + id) / std::max(1.0, n2 * n2));
    dev = std::max(dev, detail::max_abs(t.J3 * t.J3 + id) / std::max(1.0, n3 * n3));
    dev = std::max(dev, detail::max_abs(t.J1 * t.J2 * t.J3 + id) / std::max(1.0, n1 * n2 * n3));
    double gn = detail::max_abs(gram);
    for (const Mat4* J : {&t.J1, &t.J2, &t.J3}) {
        double nj = detail::max_abs(*J);
        dev = std::max(dev, detail::max_abs(J->transpose() * gram * (*J) - gram) /
                                (gn * std::max(1.0, nj * nj)));
    }
    return dev;
}

inline double check_quaternion(const JTriple& t, const MetricAtPoint& m) {
    return check_quaternion(t, gram_matrix(m));
}

inline double check_quaternion(const JTriple& t) {
    return check_quaternion(t, Mat4(Mat4::Identity()));
}

// ---------------------------------------------------------------------------
// Kahler angles and their adapted-frame matrices.
// ---------------------------------------------------------------------------

struct KahlerAngles {
    double a1, a2, a3;  // in [0, pi]
};

inline double angle_identity_residual(const KahlerAngles& a) {
    double c1 = std::cos(a.a1), c2 = std::cos(a.a2), c3 = std::cos(a.a3);
    return std::abs(c1 * c1 + c2 * c2 + c3 * c3 - 1.0);
}

inline double cos_identity_residual(double c1, double c2, double c3) {
    return std::abs(c1 * c1 + c2 * c2 + c3 * c3 - 1.0);
}

/// The three adapted-frame matrices of the angle triple. The first is the
/// canonical rotation-by-angles form; the entries of the other two are the
/// coefficients forced by the product relation, which requires sin a1 != 0.
inline JTriple angle_matrices(const KahlerAngles& ang) {
    double s1 = std::sin(ang.a1);
    if (std::abs(s1) < 1e-12)
        throw std::domain_error("angle_matrices: degenerate frame (sin a1 = 0)");
    double c1 = std::cos(ang.a1), c2 = std::cos(ang.a2), c3 = std::cos(ang.a3);
    JTriple t;
    t.J1 << 0, c1, s1, 0,
        -c1, 0, 0, -s1,
        -s1, 0, 0, c1,
        0, s1, -c1, 0;
    double b13 = -c2 * c1 / s1, b14 = c3 / s1, b23 = c3 / s1, b24 = c2 * c1 / s1, b34 = c2;
    t.J2 << 0, c2, b13, b14,
        -c2, 0, b23, b24,
        -b13, -b23, 0, b34,
        -b14, -b24, -b34, 0;
    // the operator product fixes the third matrix (its pairing with the
    // oriented tangent frame still reads cos a3): entries are the
    // c-coefficients with the global sign the composition order forces
    t.J3 = t.J1 * t.J2;
    return t;
}

// ---------------------------------------------------------------------------
// The intertwining equation and the angle formulas it induces.
// ---------------------------------------------------------------------------

struct RotationMatrix {
    std::array<std::array<double, 3>, 3> a;

    void validate(double tol = 1e-12) const {
        double dev = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double dot = 0;
                for (int k = 0; k < 3; ++k) dot += a[k][i] * a[k][j];
                dev = std::max(dev, std::abs(dot - (i == j ? 1.0 : 0.0)));
            }
        double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        dev = std::max(dev, std::abs(det - 1.0));
        if (dev > tol) throw std::domain_error("RotationMatrix: not special orthogonal");
    }
    static RotationMatrix identity() {
        return RotationMatrix{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
    }
    double row_dot(int r, const std::array<double, 3>& x) const {
        return a[r][0] * x[0] + a[r][1] * x[1] + a[r][2] * x[2];
    }
};

struct S2Point {
    std::array<double, 3> x;
    void validate(double tol = 1e-12) const {
        double n = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if (std::abs(n - 1.0) > tol) throw std::domain_error("S2Point: not on the unit sphere");
    }
};

/// First-derivative data of a disk map in the frame coordinates; the barred
/// slots are independent inputs (the conjugate-component derivatives).
struct DiskDerivatives {
    Complex dphi2, dphi3;        // d of the two frame components
    Complex dphi2bar, dphi3bar;  // d of their conjugate components
};

/// Residual of the two intertwining equations coupling the holomorphic
/// derivative slots to the conjugate ones through the rotation, the sphere
/// point and the metric parameters.
inline double triholo_residual(const RotationMatrix& A, const S2Point& x, const HKParams& p,
                               const DiskDerivatives& d) {
    double a1x = A.row_dot(0, x.x), a2x = A.row_dot(1, x.x), a3x = A.row_dot(2, x.x);
    if (std::abs(1.0 + a1x) < 1e-12)
        throw std::domain_error("triholo_residual: degenerate factor 1 + a1.x = 0");
    Complex e(std::cos(p.theta1), std::sin(p.theta1));
    Complex factor = Complex(0, 1) * (1.0 + a1x);
    Complex q = -(a2x + Complex(0, 1) * a3x);
    Complex r1 = factor * d.dphi2 - q * (std::conj(p.tau) * d.dphi2bar - p.mu * e * d.dphi3bar);
    Complex r2 =
        factor * d.dphi3 - q * (p.lambda * e * d.dphi2bar - p.tau * e * e * d.dphi3bar);
    return std::max(std::abs(r1), std::abs(r2));
}

/// Construct derivative data solving the intertwining equations exactly for
/// given conjugate slots.
inline DiskDerivatives solve_triholo(const RotationMatrix& A, const S2Point& x,
                                     const HKParams& p, Complex dphi2bar, Complex dphi3bar) {
    double a1x = A.row_dot(0, x.x), a2x = A.row_dot(1, x.x), a3x = A.row_dot(2, x.x);
    if (std::abs(1.0 + a1x) < 1e-12)
        throw std::domain_error("solve_triholo: degenerate factor 1 + a1.x = 0");
    Complex e(std::cos(p.theta1), std::sin(p.theta1));
    Complex factor = Complex(0, 1) * (1.0 + a1x);
    Complex q = -(a2x + Complex(0, 1) * a3x);
    DiskDerivatives d;
    d.dphi2bar = dphi2bar;
    d.dphi3bar = dphi3bar;
    d.dphi2 = q * (std::conj(p.tau) * dphi2bar - p.mu * e * dphi3bar) / factor;
    d.dphi3 = q * (p.lambda * e * dphi2bar - p.tau * e * e * dphi3bar) / factor;
    return d;
}

/// Raw cosine triple of the pullback angle formulas:
/// (-a1.x, -2 a2.x/(rho S), -2 a3.x/(rho S)). The third line mirrors the
/// second with the third rotation row (the imaginary part of the
/// holomorphic-form pairing).
inline std::array<double, 3> kahler_cosines(const RotationMatrix& A, const S2Point& x,
                                            double rho, double S) {
    double a1x = A.row_dot(0, x.x), a2x = A.row_dot(1, x.x), a3x = A.row_dot(2, x.x);
    return {-a1x, -2.0 * a2x / (rho * S), -2.0 * a3x / (rho * S)};
}

/// Pullback volume density factor (positive away from branch points).
inline double pullback_density(const HKParams& p, const DiskDerivatives& d) {
    Complex e(std::cos(p.theta1), std::sin(p.theta1));
    double q = p.lambda * std::norm(d.dphi2bar) + p.mu * std::norm(d.dphi3bar) -
               2.0 * (p.tau * e * std::conj(d.dphi2bar) * d.dphi3bar).real();
    return q;
}

/// Kahler angles of solution data via the pullback identities.
inline KahlerAngles angles_from_pullback(const RotationMatrix& A, const S2Point& x,
                                         const HKParams& p, double S,
                                         const DiskDerivatives& d) {
    if (triholo_residual(A, x, p, d) > 1e-10)
        throw std::domain_error("angles_from_pullback: data does not solve the equations");
    if (!(pullback_density(p, d) > 0))
        throw std::domain_error("angles_from_pullback: vanishing pullback density");
    auto c = kahler_cosines(A, x, p.rho, S);
    auto checked_acos = [](double v) {
        if (std::abs(v) > 1.0 + 1e-9)
            throw std::domain_error("angles_from_pullback: cosine out of range");
        return std::acos(std::clamp(v, -1.0, 1.0));
    };
    return {checked_acos(c[0]), checked_acos(c[1]), checked_acos(c[2])};
}

// ---------------------------------------------------------------------------
// S-constancy sweep.
// ---------------------------------------------------------------------------

struct SConstancyReport {
    int samples = 0;
    int locus_by_ratio = 0;     // points with |rho S - 2| <= tol
    int locus_by_partials = 0;  // points with non-pivot partials below tol
    bool consistent = true;     // the two loci coincide pointwise
    double min_S = 0, max_S = 0;
    double min_ratio_gap = 0;  // min |rho S - 2| over the sample set
};

/// Sweep sampled points and compare the constancy locus of rho*S = 2 with
/// the direct vanishing of the non-pivot partials; with rho = 2 the two
/// conditions are the same set.
inline SConstancyReport s_constancy_witness(const QuarticSurface& X, const HKParams& params,
                                            const std::vector<SurfacePointNum>& samples,
                                            double tol = 1e-10) {
    SConstancyReport rep;
    rep.samples = static_cast<int>(samples.size());
    rep.min_S = std::numeric_limits<double>::infinity();
    rep.min_ratio_gap = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
        TangentFrame fr = tangent_frame(X, p);
        if (fr.S < 1.0 - 1e-12) throw std::logic_error("s_constancy: S below one");
        rep.min_S = std::min(rep.min_S, fr.S);
        rep.max_S = std::max(rep.max_S, fr.S);
        double gap = std::abs(params.rho * fr.S - 2.0);
        rep.min_ratio_gap = std::min(rep.min_ratio_gap, gap);
        bool by_ratio = gap <= tol;
        // non-pivot partial magnitudes, pivot-relative: S - 1 exactly
        bool by_partials = std::sqrt(std::max(fr.S - 1.0, 0.0)) <= tol &&
                           std::abs(params.rho - 2.0) <= tol;
        rep.locus_by_ratio += by_ratio;
        rep.locus_by_partials += by_partials;
        if (by_ratio != by_partials) rep.consistent = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The explicit map into the Fermat quartic: exact verification.
// ---------------------------------------------------------------------------

struct HMapReport {
    bool composition_zero = false;   // f o h == 0 in Q(i)[w]/(w^4+1)
    bool holomorphic = false;        // no conjugate-variable dependence
    bool origin_singular = false;    // all components vanish only at the origin
    std::string first_coord_ratio;   // the constant chart-0 first coordinate
    double image_residual = 1.0;     // numeric spot check on the surface
};

/// Exact certification of the explicit holomorphic map
/// (z1, z2) -> [z1 : w z1 : z2 : w z2] into the Fermat quartic, with w the
/// formal eighth root of unity (w^4 = -1).
inline HMapReport verify_map_h() {
    HMapReport rep;
    // components as polynomials in (z1, z2, z1bar, z2bar) over Q(i)[w]/(w^4+1)
    const int NV = 4;
    PolyW z1 = PolyW::variable(NV, 0), z2 = PolyW::variable(NV, 1);
    PolyW w = PolyW::constant(NV, Cyc4::omega());
    std::array<PolyW, 4> h = {z1, w * z1, z2, w * z2};

    // (a) the Fermat equation composes to the exact zero polynomial
    const std::vector<std::string> X4 = {"x0", "x1", "x2", "x3"};
    PolyQ fermat = parse_poly("x0^4+x1^4+x2^4+x3^4", X4);
    PolyW comp = fermat.compose<Cyc4>({h[0], h[1], h[2], h[3]});
    rep.composition_zero = comp.is_zero();

    // (b) holomorphy: no dependence on the conjugate variables
    rep.holomorphic = true;
    for (const auto& c : h)
        rep.holomorphic = rep.holomorphic && c.degree_in(2) <= 0 && c.degree_in(3) <= 0;

    // (c) all four components vanish simultaneously only at the origin:
    // two of them are the coordinates themselves
    rep.origin_singular = (h[0] == z1) && (h[2] == z2);
    std::vector<Cyc4> origin(NV, Cyc4());
    for (const auto& c : h)
        rep.origin_singular = rep.origin_singular && c.evaluate(origin).is_zero();

    // (d) the chart-0 first coordinate is the constant w: x1 - w*x0 == 0
    rep.first_coord_ratio = (h[1] - w * h[0]).is_zero() ? "omega" : "nonconstant";

    // numeric spot check: the image of (1, 1) lies on the Fermat quartic
    const double s = std::sqrt(0.5);
    const Complex wnum(s, s);
    std::vector<Complex> img = {1.0, wnum, 1.0, wnum};
    rep.image_residual = std::abs(fermat.to_numeric().evaluate(img));
    return rep;
}

}  // namespace k3cert

#endif
