#ifndef K3CERT_ROOTS_HPP
#define K3CERT_ROOTS_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "k3cert/multipoly.hpp"
#include "k3cert/polygcd.hpp"

namespace k3cert {

struct RootMult {
    Complex root;
    int multiplicity;
};

// ---------------------------------------------------------------------------
// Dense univariate helpers (coefficients ascending).
// ---------------------------------------------------------------------------

namespace uni {

template <class T>
void strip(std::vector<T>& c) {
    while (!c.empty() && coeff_traits<T>::is_zero(c.back())) c.pop_back();
}

inline void strip_numeric(std::vector<Complex>& c, double rel_tol) {
    double m = 0;
    for (const auto& x : c) m = std::max(m, std::abs(x));
    while (!c.empty() && std::abs(c.back()) <= rel_tol * m) c.pop_back();
}

template <class T>
int degree(const std::vector<T>& c) {
    return static_cast<int>(c.size()) - 1;
}

template <class T>
std::vector<T> derivative(const std::vector<T>& c) {
    std::vector<T> d;
    for (std::size_t k = 1; k < c.size(); ++k) {
        T v = c[k];
        for (std::size_t j = 1; j < k; ++j) v += c[k];
        d.push_back(v);
    }
    strip(d);
    return d;
}

template <class T>
std::vector<T> make_monic(std::vector<T> c) {
    if (c.empty()) return c;
    T lead = c.back();
    for (auto& x : c) x = x / lead;
    return c;
}

/// Long division over a field: returns remainder, quotient in *quot.
template <class T>
std::vector<T> divrem(std::vector<T> num, const std::vector<T>& den,
                      std::vector<T>* quot = nullptr) {
    if (den.empty()) throw std::domain_error("divrem: zero divisor");
    int dn = degree(num), dd = degree(den);
    if (quot) quot->assign(dn >= dd ? static_cast<std::size_t>(dn - dd + 1) : 1, T{});
    while (dn >= dd && !num.empty()) {
        T f = num.back() / den.back();
        int shift = dn - dd;
        if (quot) (*quot)[static_cast<std::size_t>(shift)] = f;
        for (int k = 0; k <= dd; ++k)
            num[static_cast<std::size_t>(shift + k)] -= f * den[static_cast<std::size_t>(k)];
        num.pop_back();
        strip(num);
        dn = degree(num);
    }
    if (quot) strip(*quot);
    return num;
}

inline bool negligible(const std::vector<GaussRat>& c, double) { return c.empty(); }
inline bool negligible(const std::vector<Complex>& c, double scale) {
    double m = 0;
    for (const auto& x : c) m = std::max(m, std::abs(x));
    return m <= 1e-9 * scale;
}

/// Euclidean gcd over a field, monic result. The numeric instantiation treats
/// remainders below 1e-9 of the running scale as zero (approximate gcd).
template <class T>
std::vector<T> gcd(std::vector<T> a, std::vector<T> b) {
    double scale = 1.0;
    if constexpr (!coeff_traits<T>::exact) {
        for (const auto& x : a) scale = std::max(scale, std::abs(x));
        for (const auto& x : b) scale = std::max(scale, std::abs(x));
    }
    strip(a);
    strip(b);
    if (a.empty()) return make_monic(b);
    if (b.empty()) return make_monic(a);
    if (degree(a) < degree(b)) std::swap(a, b);
    while (!negligible(b, scale)) {
        std::vector<T> r = divrem(a, make_monic(b));
        a = std::move(b);
        b = std::move(r);
        if constexpr (!coeff_traits<T>::exact) {
            // drop sub-scale debris so the chain terminates
            double m = 0;
            for (const auto& x : b) m = std::max(m, std::abs(x));
            if (m <= 1e-9 * scale) b.clear();
        }
    }
    return make_monic(a);
}

template <class T>
T eval(const std::vector<T>& c, const T& x) {
    T acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace uni

/// Extract dense ascending coefficients of a polynomial that is univariate in
/// var (all other variables must be absent).
template <class C>
std::vector<C> dense_univariate(const MultiPoly<C>& p, int var) {
    std::vector<C> out(static_cast<std::size_t>(std::max(p.degree_in(var), -1) + 1),
                       coeff_traits<C>::zero());
    for (const auto& [e, c] : p.terms()) {
        for (std::size_t j = 0; j < e.size(); ++j)
            if (static_cast<int>(j) != var && e[j] != 0)
                throw std::domain_error("dense_univariate: polynomial is not univariate");
        out[e[static_cast<std::size_t>(var)]] = c;
    }
    return out;
}

/// Roots of a monic-izable complex polynomial via companion-matrix
/// eigenvalues. No multiplicity logic; returns deg values.
inline std::vector<Complex> companion_roots(std::vector<Complex> c) {
    uni::strip_numeric(c, 1e-14);
    int n = uni::degree(c);
    if (n < 1) return {};
    c = uni::make_monic(std::move(c));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) m(i, n - 1) = -c[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    std::vector<Complex> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()(i));
    return roots;
}

inline Complex newton_polish(const std::vector<Complex>& c, Complex x, int iters = 8) {
    std::vector<Complex> d = uni::derivative(c);
    for (int it = 0; it < iters; ++it) {
        Complex fx = uni::eval(c, x);
        Complex dfx = uni::eval(d, x);
        if (std::abs(dfx) < 1e-300) break;
        Complex step = fx / dfx;
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return x;
}

/// Square-free decomposition over an exact field of characteristic zero
/// (Yun's algorithm). Returns (factor, multiplicity) with factors monic,
/// square-free and pairwise coprime.
inline std::vector<std::pair<std::vector<GaussRat>, int>> squarefree_decompose(
    std::vector<GaussRat> p) {
    uni::strip(p);
    if (p.empty()) throw std::domain_error("squarefree_decompose: zero polynomial");
    std::vector<std::pair<std::vector<GaussRat>, int>> out;
    if (uni::degree(p) == 0) return out;
    p = uni::make_monic(std::move(p));
    std::vector<GaussRat> dp = uni::derivative(p);
    std::vector<GaussRat> g = uni::gcd(p, dp);
    std::vector<GaussRat> w, y;
    uni::divrem(p, g, &w);
    uni::divrem(dp, g, &y);
    int i = 1;
    while (uni::degree(w) > 0) {
        std::vector<GaussRat> wd = uni::derivative(w);
        std::vector<GaussRat> z = y;
        // z = y - w'
        z.resize(std::max(z.size(), wd.size()), GaussRat());
        for (std::size_t k = 0; k < wd.size(); ++k) z[k] -= wd[k];
        uni::strip(z);
        std::vector<GaussRat> gi = z.empty() ? w : uni::gcd(w, z);
        if (uni::degree(gi) > 0) out.emplace_back(gi, i);
        std::vector<GaussRat> w2, y2;
        uni::divrem(w, gi, &w2);
        if (z.empty())
            y2.clear();
        else
            uni::divrem(z, gi, &y2);
        w = std::move(w2);
        y = std::move(y2);
        ++i;
    }
    return out;
}

/// Roots with multiplicities of a nonzero exact univariate polynomial.
/// Multiplicities are exact (square-free decomposition by iterated gcd with
/// the derivative); positions are numeric, polished on the square-free
/// factor. Sum of multiplicities equals the degree.
inline std::vector<RootMult> univariate_roots(const PolyQ& p, int var = 0) {
    std::vector<GaussRat> c = dense_univariate(p, var);
    uni::strip(c);
    if (c.empty()) throw std::domain_error("univariate_roots: zero polynomial");
    std::vector<RootMult> out;
    int claimed = 0;
    for (const auto& [factor, mult] : squarefree_decompose(c)) {
        std::vector<Complex> fc(factor.size());
        for (std::size_t k = 0; k < factor.size(); ++k) fc[k] = factor[k].to_complex();
        for (Complex r : companion_roots(fc)) {
            out.push_back({newton_polish(fc, r), mult});
            claimed += mult;
        }
    }
    if (claimed != uni::degree(c))
        throw std::logic_error("univariate_roots: multiplicity bookkeeping mismatch");
    return out;
}

/// Numeric analogue for complex coefficients. Distinct root locations come
/// from the approximate square-free part p / agcd(p, p'); multiplicities from
/// nearest-root assignment of all companion eigenvalues of p, so they always
/// sum to the (pruned) degree. Positions of multiple roots are cluster means,
/// which cancels the first-order eigenvalue scatter.
inline std::vector<RootMult> univariate_roots_numeric(std::vector<Complex> c,
                                                      double strip_tol = 1e-12) {
    uni::strip_numeric(c, strip_tol);
    if (c.empty()) throw std::domain_error("univariate_roots_numeric: zero polynomial");
    int deg = uni::degree(c);
    if (deg == 0) return {};
    std::vector<Complex> sf;
    {
        std::vector<Complex> g = uni::gcd(c, uni::derivative(c));
        if (uni::degree(g) >= 1) {
            std::vector<Complex> q;
            std::vector<Complex> rem = uni::divrem(c, g, &q);
            double rm = 0, cm = 0;
            for (const auto& x : rem) rm = std::max(rm, std::abs(x));
            for (const auto& x : c) cm = std::max(cm, std::abs(x));
            sf = (rm <= 1e-6 * std::max(cm, 1.0)) ? q : c;
        } else {
            sf = c;
        }
    }
    std::vector<Complex> centers = companion_roots(sf);
    for (auto& r : centers) r = newton_polish(sf, r);
    if (centers.empty()) centers = companion_roots(c);
    std::vector<Complex> raw = companion_roots(c);
    std::vector<int> counts(centers.size(), 0);
    std::vector<Complex> sums(centers.size(), Complex(0, 0));
    for (Complex r : raw) {
        std::size_t best = 0;
        double bd = std::abs(r - centers[0]);
        for (std::size_t j = 1; j < centers.size(); ++j) {
            double d = std::abs(r - centers[j]);
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        counts[best] += 1;
        sums[best] += r;
    }
    std::vector<RootMult> out;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        if (counts[j] == 0) continue;
        Complex pos = counts[j] == 1 ? newton_polish(c, centers[j])
                                     : sums[j] / static_cast<double>(counts[j]);
        out.push_back({pos, counts[j]});
    }
    return out;
}

}  // namespace k3cert

#endif
