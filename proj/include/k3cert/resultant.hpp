#ifndef K3CERT_RESULTANT_HPP
#define K3CERT_RESULTANT_HPP

#include <stdexcept>
#include <vector>

#include "k3cert/multipoly.hpp"
#include "k3cert/polygcd.hpp"

namespace k3cert {

/// Sylvester matrix of p, q in one variable: p's coefficient rows on top
/// (deg q of them), then q's (deg p of them), coefficients in descending
/// powers of var. Entries are polynomials in the remaining variables.
template <class C>
std::vector<std::vector<MultiPoly<C>>> sylvester_matrix(const MultiPoly<C>& p,
                                                        const MultiPoly<C>& q, int var) {
    int dp = p.degree_in(var), dq = q.degree_in(var);
    if (dp <= 0 || dq <= 0) throw std::domain_error("sylvester_matrix: needs positive degrees");
    int n = dp + dq;
    std::vector<std::vector<MultiPoly<C>>> m(
        static_cast<std::size_t>(n),
        std::vector<MultiPoly<C>>(static_cast<std::size_t>(n), MultiPoly<C>(p.nvars())));
    for (int r = 0; r < dq; ++r)
        for (int k = 0; k <= dp; ++k)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] =
                coeff_wrt(p, var, static_cast<unsigned>(dp - k));
    for (int r = 0; r < dp; ++r)
        for (int k = 0; k <= dq; ++k)
            m[static_cast<std::size_t>(dq + r)][static_cast<std::size_t>(r + k)] =
                coeff_wrt(q, var, static_cast<unsigned>(dq - k));
    return m;
}

/// Fraction-free determinant (Bareiss). Entries live in an integral domain;
/// every division is exact.
template <class C>
MultiPoly<C> bareiss_determinant(std::vector<std::vector<MultiPoly<C>>> m, int nvars) {
    std::size_t n = m.size();
    if (n == 0) return MultiPoly<C>::constant(nvars, coeff_traits<C>::one());
    bool negate = false;
    MultiPoly<C> prev = MultiPoly<C>::constant(nvars, coeff_traits<C>::one());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return MultiPoly<C>(nvars);  // singular
            std::swap(m[k], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                MultiPoly<C> num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
                auto q = exact_divide(num, prev);
                if (!q) throw std::logic_error("bareiss_determinant: inexact division");
                m[i][j] = std::move(*q);
            }
            m[i][k] = MultiPoly<C>(nvars);
        }
        prev = m[k][k];
    }
    MultiPoly<C> det = m[n - 1][n - 1];
    return negate ? -det : det;
}

/// Resultant of p and q with respect to var: the Sylvester determinant with
/// p's coefficients in the top rows (sign convention fixed by that layout).
/// When exactly one input is constant in var, Res = c^deg(other); vanishes
/// identically iff p and q share a factor of positive degree in var.
template <class C>
MultiPoly<C> resultant(const MultiPoly<C>& p, const MultiPoly<C>& q, int var) {
    if (p.is_zero() || q.is_zero()) throw std::domain_error("resultant: zero input");
    int dp = p.degree_in(var), dq = q.degree_in(var);
    if (dp == 0 && dq == 0)
        throw std::domain_error("resultant: both inputs constant in the variable");
    if (dq == 0) return q.pow(static_cast<unsigned>(dp));
    if (dp == 0) return p.pow(static_cast<unsigned>(dq));
    return bareiss_determinant(sylvester_matrix(p, q, var), p.nvars());
}

}  // namespace k3cert

#endif
