#ifndef K3CERT_POLYGCD_HPP
#define K3CERT_POLYGCD_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "k3cert/multipoly.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// Zero-test policy. Exact coefficients test exactly; numeric coefficients
// test relative to the scale of the top-level inputs (tolerance 1e-10) and
// chop sub-scale debris after each ring operation. The numeric instantiation
// exists for the float-sigma curve paths and is a documented heuristic.
// ---------------------------------------------------------------------------

template <class C>
struct gcd_policy {
    static constexpr double rel_tol = 0.0;
    static bool negligible(const MultiPoly<C>& p, double) { return p.is_zero(); }
    static MultiPoly<C> chop(MultiPoly<C> p, double) { return p; }
};

template <>
struct gcd_policy<Complex> {
    static constexpr double rel_tol = 1e-10;
    static bool negligible(const MultiPoly<Complex>& p, double scale) {
        return p.max_coeff_abs() <= rel_tol * scale;
    }
    static MultiPoly<Complex> chop(MultiPoly<Complex> p, double scale) {
        MultiPoly<Complex> r(p.nvars());
        for (const auto& [e, c] : p.terms())
            if (std::abs(c) > rel_tol * scale) r.add_term(e, c);
        return r;
    }
};

template <class C>
double gcd_scale(const MultiPoly<C>& p, const MultiPoly<C>& q) {
    if constexpr (coeff_traits<C>::exact)
        return 1.0;
    else
        return std::max({p.max_coeff_abs(), q.max_coeff_abs(), 1.0});
}

// ---------------------------------------------------------------------------
// Structural helpers on the flat representation.
// ---------------------------------------------------------------------------

/// Coefficient of var^k as a polynomial in the same variable space
/// (the var-exponent of the result is zero).
template <class C>
MultiPoly<C> coeff_wrt(const MultiPoly<C>& p, int var, unsigned k) {
    MultiPoly<C> r(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        if (e[static_cast<std::size_t>(var)] != k) continue;
        Exponents d = e;
        d[static_cast<std::size_t>(var)] = 0;
        r.add_term(d, c);
    }
    return r;
}

template <class C>
MultiPoly<C> shift_var(const MultiPoly<C>& p, int var, unsigned k) {
    MultiPoly<C> r(p.nvars());
    for (const auto& [e, c] : p.terms()) {
        Exponents d = e;
        d[static_cast<std::size_t>(var)] += k;
        r.add_term(d, c);
    }
    return r;
}

template <class C>
MultiPoly<C> leading_coeff_wrt(const MultiPoly<C>& p, int var) {
    int d = p.degree_in(var);
    if (d < 0) throw std::domain_error("leading_coeff_wrt: zero polynomial");
    return coeff_wrt(p, var, static_cast<unsigned>(d));
}

/// Quotient of an exact single-divisor division, or nullopt when the divisor
/// does not divide p. Works over any field coefficient; the numeric
/// instantiation accepts a negligible remainder.
template <class C>
std::optional<MultiPoly<C>> exact_divide(const MultiPoly<C>& p, const MultiPoly<C>& q) {
    if (q.is_zero()) throw std::domain_error("exact_divide: zero divisor");
    double scale = gcd_scale(p, q);
    MultiPoly<C> rem = p, quot(p.nvars());
    const auto [qe, qc] = q.leading_term();
    while (!gcd_policy<C>::negligible(rem, scale)) {
        rem = gcd_policy<C>::chop(std::move(rem), scale);
        if (rem.is_zero()) break;
        const auto [re, rc] = rem.leading_term();
        Exponents me(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) {
            if (re[i] < qe[i]) return std::nullopt;
            me[i] = re[i] - qe[i];
        }
        C mc = rc / qc;
        quot.add_term(me, mc);
        rem -= q * MultiPoly<C>::monomial(p.nvars(), me, mc);
    }
    return quot;
}

template <class C>
bool divides(const MultiPoly<C>& q, const MultiPoly<C>& p) {
    return exact_divide(p, q).has_value();
}

/// Scale so that the graded-lex leading coefficient is one.
template <class C>
MultiPoly<C> normalize_leading(MultiPoly<C> p) {
    if (p.is_zero()) return p;
    C lead = p.leading_term().second;
    p.scale(coeff_traits<C>::one() / lead);
    return p;
}

// ---------------------------------------------------------------------------
// Pseudo-division and the primitive-part subresultant PRS.
// ---------------------------------------------------------------------------

/// Pseudo-remainder prem(u, v, var) = lc_var(v)^(deg u - deg v + 1) * u mod v.
template <class C>
MultiPoly<C> pseudo_remainder(const MultiPoly<C>& u, const MultiPoly<C>& v, int var) {
    int dv = v.degree_in(var);
    if (dv < 0) throw std::domain_error("pseudo_remainder: divisor zero");
    double scale = gcd_scale(u, v);
    MultiPoly<C> lcv = leading_coeff_wrt(v, var);
    MultiPoly<C> r = u;
    int e = u.degree_in(var) - dv + 1;
    while (!r.is_zero() && r.degree_in(var) >= dv) {
        int dr = r.degree_in(var);
        MultiPoly<C> lcr = coeff_wrt(r, var, static_cast<unsigned>(dr));
        r = lcv * r - shift_var(lcr * v, var, static_cast<unsigned>(dr - dv));
        r = gcd_policy<C>::chop(std::move(r), scale);
        --e;
    }
    for (; e > 0; --e) r = r * lcv;
    return r;
}

template <class C>
MultiPoly<C> gcd_poly(const MultiPoly<C>& p, const MultiPoly<C>& q);

/// gcd of the var-coefficients (a polynomial free of var).
template <class C>
MultiPoly<C> content_wrt(const MultiPoly<C>& p, int var) {
    MultiPoly<C> acc(p.nvars());
    int d = p.degree_in(var);
    for (int k = 0; k <= d; ++k) {
        MultiPoly<C> ck = coeff_wrt(p, var, static_cast<unsigned>(k));
        if (ck.is_zero()) continue;
        acc = acc.is_zero() ? normalize_leading(std::move(ck)) : gcd_poly(acc, ck);
        if (acc.is_constant()) break;
    }
    return acc;
}

/// Greatest common divisor, normalized so the graded-lex leading coefficient
/// is one. Primitive-part subresultant remainder sequence with one main
/// variable, content handled recursively over the remaining variables.
template <class C>
MultiPoly<C> gcd_poly(const MultiPoly<C>& p, const MultiPoly<C>& q) {
    if (p.is_zero() && q.is_zero()) throw std::domain_error("gcd_poly: both inputs zero");
    if (p.is_zero()) return normalize_leading(q);
    if (q.is_zero()) return normalize_leading(p);
    if (p.is_constant() || q.is_constant())
        return MultiPoly<C>::constant(p.nvars(), coeff_traits<C>::one());

    double scale = gcd_scale(p, q);

    // main variable: last index occurring in either input
    int main = -1;
    for (int v = p.nvars() - 1; v >= 0; --v) {
        if (p.degree_in(v) > 0 || q.degree_in(v) > 0) {
            main = v;
            break;
        }
    }
    if (main < 0) return MultiPoly<C>::constant(p.nvars(), coeff_traits<C>::one());

    if (p.degree_in(main) == 0) return gcd_poly(content_wrt(q, main), p);
    if (q.degree_in(main) == 0) return gcd_poly(content_wrt(p, main), q);

    MultiPoly<C> cp = content_wrt(p, main);
    MultiPoly<C> cq = content_wrt(q, main);
    MultiPoly<C> u = *exact_divide(p, cp);
    MultiPoly<C> v = *exact_divide(q, cq);
    if (u.degree_in(main) < v.degree_in(main)) std::swap(u, v);

    MultiPoly<C> one = MultiPoly<C>::constant(p.nvars(), coeff_traits<C>::one());
    MultiPoly<C> g = one, h = one;
    for (;;) {
        int delta = u.degree_in(main) - v.degree_in(main);
        MultiPoly<C> r = pseudo_remainder(u, v, main);
        if (gcd_policy<C>::negligible(r, scale)) break;
        r = gcd_policy<C>::chop(std::move(r), scale);
        if (r.degree_in(main) <= 0) {
            // primitive parts are coprime in the main variable
            v = one;
            break;
        }
        u = v;
        MultiPoly<C> divisor = g * h.pow(static_cast<unsigned>(delta));
        auto quo = exact_divide(r, divisor);
        if (!quo) throw std::logic_error("gcd_poly: subresultant division failed");
        v = std::move(*quo);
        g = leading_coeff_wrt(u, main);
        if (delta >= 1) {
            auto hq = exact_divide(g.pow(static_cast<unsigned>(delta)),
                                   h.pow(static_cast<unsigned>(delta - 1)));
            if (!hq) throw std::logic_error("gcd_poly: h update failed");
            h = std::move(*hq);
        }
    }
    MultiPoly<C> pp = v.is_constant() ? one : *exact_divide(v, content_wrt(v, main));
    return normalize_leading(gcd_poly(cp, cq) * pp);
}

/// Fold gcd over several polynomials (zero entries skipped).
template <class C>
MultiPoly<C> gcd_many(const std::vector<MultiPoly<C>>& ps) {
    MultiPoly<C> acc;
    bool seen = false;
    for (const auto& p : ps) {
        if (p.is_zero()) continue;
        acc = seen ? gcd_poly(acc, p) : normalize_leading(p);
        seen = true;
        if (acc.is_constant()) break;
    }
    if (!seen) throw std::domain_error("gcd_many: all inputs zero");
    return acc;
}

}  // namespace k3cert

#endif
