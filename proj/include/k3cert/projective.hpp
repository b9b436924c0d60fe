#ifndef K3CERT_PROJECTIVE_HPP
#define K3CERT_PROJECTIVE_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "k3cert/multipoly.hpp"

namespace k3cert {

/// Index of the nonvanishing coordinate selecting an affine chart.
struct ChartId {
    int i = 0;
    ChartId() = default;
    ChartId(int idx, int n) : i(idx) {
        if (idx < 0 || idx >= n) throw std::out_of_range("ChartId: index out of range");
    }
    friend bool operator==(ChartId a, ChartId b) { return a.i == b.i; }
};

/// Point of CP^(n-1), n = 3 or 4, with exact or numeric coordinates.
template <class T>
struct ProjPoint {
    std::vector<T> coords;

    ProjPoint() = default;
    explicit ProjPoint(std::vector<T> c) : coords(std::move(c)) {
        bool nonzero = false;
        for (const auto& x : coords) nonzero = nonzero || !coeff_traits<T>::is_zero(x);
        if (!nonzero) throw std::invalid_argument("ProjPoint: all coordinates zero");
    }

    int dim() const { return static_cast<int>(coords.size()); }

    /// Index of the max-modulus coordinate.
    int max_coord() const {
        int best = 0;
        double bm = coeff_traits<T>::abs(coords[0]);
        for (std::size_t k = 1; k < coords.size(); ++k) {
            double m = coeff_traits<T>::abs(coords[k]);
            if (m > bm) {
                bm = m;
                best = static_cast<int>(k);
            }
        }
        return best;
    }
};

using ProjPointQ = ProjPoint<GaussRat>;
using ProjPointC = ProjPoint<Complex>;

/// First nonzero coordinate scaled to one; equal normalized forms mean
/// projective equality on the exact path.
template <class T>
ProjPoint<T> normalize(const ProjPoint<T>& p) {
    std::size_t piv = p.coords.size();
    for (std::size_t k = 0; k < p.coords.size(); ++k) {
        if (!coeff_traits<T>::is_zero(p.coords[k])) {
            piv = k;
            break;
        }
    }
    if (piv == p.coords.size()) throw std::invalid_argument("normalize: zero point");
    std::vector<T> out(p.coords.size());
    for (std::size_t k = 0; k < p.coords.size(); ++k) out[k] = p.coords[k] / p.coords[piv];
    return ProjPoint<T>(std::move(out));
}

/// Exact projective equality: all 2x2 minors vanish.
inline bool proj_equal(const ProjPointQ& a, const ProjPointQ& b) {
    if (a.coords.size() != b.coords.size()) return false;
    for (std::size_t i = 0; i < a.coords.size(); ++i)
        for (std::size_t j = i + 1; j < a.coords.size(); ++j)
            if (!(a.coords[i] * b.coords[j] - a.coords[j] * b.coords[i]).is_zero()) return false;
    return true;
}

/// Numeric projective equality: scale both by the max-modulus coordinate and
/// compare with relative tolerance.
inline bool proj_equal(const ProjPointC& a, const ProjPointC& b, double tol = 1e-10) {
    if (a.coords.size() != b.coords.size()) return false;
    int ia = a.max_coord();
    // use the same pivot for both; fall back to b's if a's is tiny there
    if (std::abs(b.coords[static_cast<std::size_t>(ia)]) <
        0.5 * std::abs(b.coords[static_cast<std::size_t>(b.max_coord())]))
        ia = b.max_coord();
    Complex ca = a.coords[static_cast<std::size_t>(ia)];
    Complex cb = b.coords[static_cast<std::size_t>(ia)];
    if (std::abs(ca) == 0 || std::abs(cb) == 0) return false;
    double dev = 0;
    for (std::size_t k = 0; k < a.coords.size(); ++k)
        dev = std::max(dev, std::abs(a.coords[k] / ca - b.coords[k] / cb));
    return dev <= tol;
}

/// Chart-local affine coordinates x_j / x_chart, j != chart in increasing
/// order (chart 0 of CP^3 gives (z1,z2,z3), chart 1 gives (y0,y2,y3), ...).
template <class T>
struct AffineCoords {
    ChartId chart;
    std::vector<T> values;  // length dim-1
};

using AffineCoordsQ = AffineCoords<GaussRat>;
using AffineCoordsC = AffineCoords<Complex>;

template <class T>
AffineCoords<T> to_chart(const ProjPoint<T>& p, ChartId c) {
    const T& piv = p.coords[static_cast<std::size_t>(c.i)];
    bool bad;
    if constexpr (coeff_traits<T>::exact)
        bad = coeff_traits<T>::is_zero(piv);
    else
        bad = coeff_traits<T>::abs(piv) <=
              1e-12 * coeff_traits<T>::abs(p.coords[static_cast<std::size_t>(p.max_coord())]);
    if (bad) throw std::domain_error("to_chart: point lies on the chart hyperplane");
    AffineCoords<T> a;
    a.chart = c;
    for (int j = 0; j < p.dim(); ++j)
        if (j != c.i) a.values.push_back(p.coords[static_cast<std::size_t>(j)] / piv);
    return a;
}

template <class T>
ProjPoint<T> from_chart(const AffineCoords<T>& a) {
    std::vector<T> coords;
    int n = static_cast<int>(a.values.size()) + 1;
    std::size_t v = 0;
    for (int j = 0; j < n; ++j) {
        if (j == a.chart.i)
            coords.push_back(coeff_traits<T>::one());
        else
            coords.push_back(a.values[v++]);
    }
    return ProjPoint<T>(std::move(coords));
}

/// Chart transition on overlaps: for charts 0 -> 1 of CP^3 this realizes
/// y0 = 1/z1, y2 = z2/z1, y3 = z3/z1 exactly.
template <class T>
AffineCoords<T> transition(const AffineCoords<T>& a, ChartId target) {
    return to_chart(from_chart(a), target);
}

/// Derivative of the transition map as a (dim-1)x(dim-1) matrix d(target
/// coords)/d(source coords), the exact differential rendered in T.
template <class T>
std::vector<std::vector<T>> transition_jacobian(const AffineCoords<T>& a, ChartId target) {
    int n = static_cast<int>(a.values.size()) + 1;
    int c = a.chart.i, b = target.i;
    std::vector<std::vector<T>> jac(static_cast<std::size_t>(n - 1),
                                    std::vector<T>(static_cast<std::size_t>(n - 1),
                                                   coeff_traits<T>::zero()));
    if (b == c) {
        for (std::size_t k = 0; k + 1 < static_cast<std::size_t>(n); ++k)
            jac[k][k] = coeff_traits<T>::one();
        return jac;
    }
    // position of x_j in the source/target coordinate lists
    auto src_pos = [&](int j) { return j < c ? j : j - 1; };
    auto tgt_pos = [&](int j) { return j < b ? j : j - 1; };
    const T& ub = a.values[static_cast<std::size_t>(src_pos(b))];
    if (coeff_traits<T>::is_zero(ub))
        throw std::domain_error("transition_jacobian: point not in target chart");
    T ub2 = ub * ub;
    for (int k = 0; k < n; ++k) {  // target coordinate x_k/x_b
        if (k == b) continue;
        std::size_t row = static_cast<std::size_t>(tgt_pos(k));
        if (k == c) {
            // u'_k = 1/u_b
            jac[row][static_cast<std::size_t>(src_pos(b))] =
                -coeff_traits<T>::one() / ub2;
        } else {
            // u'_k = u_k / u_b
            const T& uk = a.values[static_cast<std::size_t>(src_pos(k))];
            jac[row][static_cast<std::size_t>(src_pos(k))] = coeff_traits<T>::one() / ub;
            jac[row][static_cast<std::size_t>(src_pos(b))] = -uk / ub2;
        }
    }
    return jac;
}

/// Exact certificate for the chart-0/chart-1 overlap relation of a quartic.
/// With fhat the chart-0 equation and F1 the chart-1 equation, homogeneity
/// forces, as polynomials in (z1,z2,z3),
///   z1^3 * dF1/dy0 (1/z1, z2/z1, z3/z1) = 4*fhat - (z1 f_1 + z2 f_2 + z3 f_3),
/// whose restriction to {fhat = 0} is the overlap relation used to glue the
/// chart forms. Returns true for every homogeneous quartic.
inline bool verify_transition_identity(const PolyQ& f) {
    if (f.nvars() != 4 || !check_homogeneous(f, 4))
        throw std::domain_error("verify_transition_identity: needs a homogeneous quartic");
    PolyQ fhat = dehomogenize(f, 0);   // vars z1,z2,z3
    PolyQ chart1 = dehomogenize(f, 1); // vars y0,y2,y3
    PolyQ g = chart1.derivative(0);    // dF1/dy0, degree <= 3
    // clear denominators: z1^3 * g(1/z1, z2/z1, z3/z1)
    PolyQ cleared(3);
    for (const auto& [e, c] : g.terms()) {
        unsigned a = e[0], b = e[1], d = e[2];
        if (a + b + d > 3) return false;  // cannot happen for a quartic
        cleared.add_term({3u - a - b - d, b, d}, c);
    }
    PolyQ rhs(3);
    for (int v = 0; v < 3; ++v) rhs += PolyQ::variable(3, v) * fhat.derivative(v);
    return cleared == fhat * GaussRat(4) - rhs;
}

}  // namespace k3cert

#endif
