#ifndef K3CERT_MULTIPOLY_HPP
#define K3CERT_MULTIPOLY_HPP

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3cert/cyclotomic.hpp"
#include "k3cert/rational.hpp"

namespace k3cert {

// ---------------------------------------------------------------------------
// Coefficient traits. A coefficient ring needs zero/one, exact zero test and
// a display form; field types additionally divide.
// ---------------------------------------------------------------------------

template <class C>
struct coeff_traits;

template <>
struct coeff_traits<GaussRat> {
    static GaussRat zero() { return GaussRat(); }
    static GaussRat one() { return GaussRat(1); }
    static bool is_zero(const GaussRat& c) { return c.is_zero(); }
    static double abs(const GaussRat& c) { return abs_value(c); }
    static Complex to_complex(const GaussRat& c) { return c.to_complex(); }
    static std::string str(const GaussRat& c) { return c.str(); }
    static constexpr bool exact = true;
};

template <>
struct coeff_traits<Complex> {
    static Complex zero() { return Complex(0, 0); }
    static Complex one() { return Complex(1, 0); }
    static bool is_zero(const Complex& c) { return c == Complex(0, 0); }
    static double abs(const Complex& c) { return std::abs(c); }
    static Complex to_complex(const Complex& c) { return c; }
    static std::string str(const Complex& c) {
        std::ostringstream os;
        os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
        return os.str();
    }
    static constexpr bool exact = false;
};

template <>
struct coeff_traits<Cyc4> {
    static Cyc4 zero() { return Cyc4(); }
    static Cyc4 one() { return Cyc4(GaussRat::one()); }
    static bool is_zero(const Cyc4& c) { return c.is_zero(); }
    static double abs(const Cyc4& c) { return std::abs(c.to_complex()); }
    static Complex to_complex(const Cyc4& c) { return c.to_complex(); }
    static std::string str(const Cyc4& c) { return c.str(); }
    static constexpr bool exact = true;
};

// ---------------------------------------------------------------------------
// Monomials: exponent tuples under graded-lexicographic order (total degree
// first, earlier variables stronger). This is the canonical term order used
// for storage, normalization and rendering.
// ---------------------------------------------------------------------------

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return a.size() < b.size();
    }
};

// ---------------------------------------------------------------------------
// MultiPoly: sparse multivariate polynomial with a fixed variable count.
// Invariant: no stored zero coefficients; all exponent tuples have length
// nvars(); the zero polynomial is the empty map.
// ---------------------------------------------------------------------------

template <class C>
class MultiPoly {
  public:
    using Coeff = C;
    using Traits = coeff_traits<C>;
    using TermMap = std::map<Exponents, C, GrlexLess>;

    MultiPoly() : nvars_(0) {}
    explicit MultiPoly(int nvars) : nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("MultiPoly: negative variable count");
    }

    static MultiPoly constant(int nvars, C value) {
        MultiPoly p(nvars);
        if (!Traits::is_zero(value)) p.terms_.emplace(Exponents(nvars, 0), std::move(value));
        return p;
    }
    static MultiPoly variable(int nvars, int var, unsigned power = 1) {
        MultiPoly p(nvars);
        if (var < 0 || var >= nvars) throw std::out_of_range("MultiPoly: variable index");
        Exponents e(nvars, 0);
        e[static_cast<std::size_t>(var)] = power;
        p.terms_.emplace(std::move(e), Traits::one());
        return p;
    }
    static MultiPoly monomial(int nvars, Exponents e, C coeff) {
        MultiPoly p(nvars);
        if (static_cast<int>(e.size()) != nvars)
            throw std::invalid_argument("MultiPoly: exponent length mismatch");
        if (!Traits::is_zero(coeff)) p.terms_.emplace(std::move(e), std::move(coeff));
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    std::size_t term_count() const { return terms_.size(); }

    C constant_value() const {
        if (terms_.empty()) return Traits::zero();
        auto it = terms_.find(Exponents(nvars_, 0));
        return it == terms_.end() ? Traits::zero() : it->second;
    }

    int degree() const {  // total degree; -1 for the zero polynomial
        if (terms_.empty()) return -1;
        return static_cast<int>(total_degree(terms_.rbegin()->first));
    }
    int degree_in(int var) const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(e[static_cast<std::size_t>(var)]));
        return d;
    }

    /// Leading term under graded-lex.
    std::pair<Exponents, C> leading_term() const {
        if (terms_.empty()) throw std::domain_error("MultiPoly: leading term of zero");
        return *terms_.rbegin();
    }

    void add_term(const Exponents& e, const C& coeff) {
        if (Traits::is_zero(coeff)) return;
        auto [it, inserted] = terms_.emplace(e, coeff);
        if (!inserted) {
            it->second += coeff;
            if (Traits::is_zero(it->second)) terms_.erase(it);
        }
    }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    MultiPoly& operator+=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check_same(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same(b);
        MultiPoly r(a.nvars_);
        Exponents e(static_cast<std::size_t>(a.nvars_));
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly& scale(const C& s) {
        if (Traits::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        prune_zeros();
        return *this;
    }
    friend MultiPoly operator*(MultiPoly p, const C& s) { return p.scale(s); }
    friend MultiPoly operator*(const C& s, MultiPoly p) { return p.scale(s); }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    MultiPoly pow(unsigned k) const {
        MultiPoly acc = constant(nvars_, Traits::one());
        MultiPoly base = *this;
        while (k) {
            if (k & 1u) acc *= base;
            base = (k >>= 1u) ? base * base : base;
        }
        return acc;
    }

    /// Exact formal partial derivative.
    MultiPoly derivative(int var) const {
        if (var < 0 || var >= nvars_) throw std::out_of_range("derivative: variable index");
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            unsigned k = e[static_cast<std::size_t>(var)];
            if (k == 0) continue;
            Exponents d = e;
            d[static_cast<std::size_t>(var)] = k - 1;
            C nc = c;
            nc *= mult_by_uint<C>(k);
            r.add_term(d, nc);
        }
        return r;
    }

    /// Evaluate at a point, Horner in the last variable with cached powers of
    /// the others. Scalar type S must support S*S, S+S and conversion of C.
    template <class S>
    S evaluate(const std::vector<S>& point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("evaluate: point length mismatch");
        if (terms_.empty()) return S{};
        if (nvars_ == 0) return convert_coeff<S>(terms_.begin()->second);
        // group by the exponent of the last variable, Horner over it
        int last = nvars_ - 1;
        std::map<unsigned, S> slices;
        std::vector<std::vector<S>> powers(static_cast<std::size_t>(nvars_ - 1));
        for (const auto& [e, c] : terms_) {
            S v = convert_coeff<S>(c);
            for (int j = 0; j + 1 < nvars_; ++j) {
                unsigned k = e[static_cast<std::size_t>(j)];
                if (k) v = v * var_power(powers[static_cast<std::size_t>(j)], point[static_cast<std::size_t>(j)], k);
            }
            unsigned klast = e[static_cast<std::size_t>(last)];
            auto [it, fresh] = slices.emplace(klast, v);
            if (!fresh) it->second = it->second + v;
        }
        S acc{};
        unsigned cur = slices.rbegin()->first;
        acc = slices.rbegin()->second;
        for (auto it = std::next(slices.rbegin()); it != slices.rend(); ++it) {
            for (unsigned k = cur; k > it->first; --k) acc = acc * point[static_cast<std::size_t>(last)];
            acc = acc + it->second;
            cur = it->first;
        }
        for (unsigned k = cur; k > 0; --k) acc = acc * point[static_cast<std::size_t>(last)];
        return acc;
    }

    /// Substitute a constant for one variable and drop it from the tuple,
    /// keeping the remaining variables in order.
    MultiPoly substitute_const(int var, const C& value) const {
        if (var < 0 || var >= nvars_) throw std::out_of_range("substitute_const: index");
        MultiPoly r(nvars_ - 1);
        std::vector<C> powers{Traits::one()};
        for (const auto& [e, c] : terms_) {
            unsigned k = e[static_cast<std::size_t>(var)];
            while (powers.size() <= k) powers.push_back(powers.back() * value);
            Exponents d;
            d.reserve(static_cast<std::size_t>(nvars_ - 1));
            for (int j = 0; j < nvars_; ++j)
                if (j != var) d.push_back(e[static_cast<std::size_t>(j)]);
            r.add_term(d, c * powers[k]);
        }
        return r;
    }

    /// Substitute whole polynomials for every variable (they must share a
    /// common variable space). Used for linear coordinate changes and for
    /// composing the surface equation with parametrized maps.
    template <class D>
    MultiPoly<D> compose(const std::vector<MultiPoly<D>>& images) const {
        if (static_cast<int>(images.size()) != nvars_)
            throw std::invalid_argument("compose: image count mismatch");
        int m = images.empty() ? 0 : images[0].nvars();
        MultiPoly<D> r(m);
        std::vector<std::vector<MultiPoly<D>>> powers(images.size());
        for (std::size_t j = 0; j < images.size(); ++j)
            powers[j].push_back(MultiPoly<D>::constant(m, coeff_traits<D>::one()));
        for (const auto& [e, c] : terms_) {
            MultiPoly<D> t = MultiPoly<D>::constant(m, convert_coeff_to<D>(c));
            for (std::size_t j = 0; j < images.size(); ++j) {
                unsigned k = e[j];
                while (powers[j].size() <= k) powers[j].push_back(powers[j].back() * images[j]);
                if (k) t *= powers[j][k];
            }
            r += t;
        }
        return r;
    }

    /// Map coefficients, preserving structure (e.g. exact -> numeric).
    template <class D, class F>
    MultiPoly<D> map_coeffs(F&& f) const {
        MultiPoly<D> r(nvars_);
        for (const auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }

    MultiPoly<Complex> to_numeric() const {
        return map_coeffs<Complex>([](const C& c) { return Traits::to_complex(c); });
    }

    double max_coeff_abs() const {
        double m = 0;
        for (const auto& [e, c] : terms_) m = std::max(m, Traits::abs(c));
        return m;
    }

    /// Drop terms with |coeff| <= rel_tol * max |coeff| (numeric cleanup).
    MultiPoly pruned(double rel_tol) const {
        double cut = rel_tol * max_coeff_abs();
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_)
            if (Traits::abs(c) > cut) r.terms_.emplace(e, c);
        return r;
    }

  private:
    int nvars_;
    TermMap terms_;

    void check_same(const MultiPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("MultiPoly: variable count mismatch");
    }
    void prune_zeros() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = Traits::is_zero(it->second) ? terms_.erase(it) : std::next(it);
    }

    template <class S>
    static const S& var_power(std::vector<S>& cache, const S& x, unsigned k) {
        if (cache.empty()) cache.push_back(x);
        while (cache.size() < k) cache.push_back(cache.back() * x);
        return cache[k - 1];
    }

    template <class T>
    static T mult_by_uint(unsigned k);

    template <class S>
    static S convert_coeff(const C& c) {
        if constexpr (std::is_same_v<S, C>)
            return c;
        else
            return S(Traits::to_complex(c));
    }
    template <class D>
    static D convert_coeff_to(const C& c) {
        if constexpr (std::is_same_v<D, C>)
            return c;
        else if constexpr (std::is_same_v<D, Complex>)
            return Traits::to_complex(c);
        else if constexpr (std::is_same_v<D, Cyc4> && std::is_same_v<C, GaussRat>)
            return Cyc4(c);
        else
            static_assert(std::is_same_v<D, C>, "unsupported coefficient conversion");
    }
};

template <>
template <>
inline GaussRat MultiPoly<GaussRat>::mult_by_uint<GaussRat>(unsigned k) {
    return GaussRat(static_cast<long>(k));
}
template <>
template <>
inline Complex MultiPoly<Complex>::mult_by_uint<Complex>(unsigned k) {
    return Complex(static_cast<double>(k), 0);
}
template <>
template <>
inline Cyc4 MultiPoly<Cyc4>::mult_by_uint<Cyc4>(unsigned k) {
    return Cyc4(GaussRat(static_cast<long>(k)));
}

using PolyQ = MultiPoly<GaussRat>;
using PolyC = MultiPoly<Complex>;
using PolyW = MultiPoly<Cyc4>;

// ---------------------------------------------------------------------------
// Homogeneity, dehomogenization and rehomogenization.
// ---------------------------------------------------------------------------

/// Result of a homogeneity check; carries the first offending term on failure.
struct HomogeneityCheck {
    bool ok = true;
    std::optional<Exponents> offender;
    explicit operator bool() const { return ok; }
};

/// True iff every term has total degree d and the Euler identity
/// sum_i x_i * dp/dx_i == d * p holds exactly. The zero polynomial is
/// homogeneous of every degree by convention.
template <class C>
HomogeneityCheck check_homogeneous(const MultiPoly<C>& p, unsigned d) {
    for (const auto& [e, c] : p.terms()) {
        if (total_degree(e) != d) return {false, e};
    }
    if constexpr (coeff_traits<C>::exact) {
        MultiPoly<C> euler(p.nvars());
        for (int i = 0; i < p.nvars(); ++i)
            euler += MultiPoly<C>::variable(p.nvars(), i) * p.derivative(i);
        MultiPoly<C> dp = p;
        for (unsigned k = 1; k < d; ++k) dp += p;  // d * p without needing C(int)
        if (d == 0) dp = MultiPoly<C>(p.nvars());
        if (!(euler == dp)) return {false, std::nullopt};
    }
    return {};
}

/// Substitute x_var = 1 and drop the variable (the affine chart equation).
template <class C>
MultiPoly<C> dehomogenize(const MultiPoly<C>& p, int var) {
    if (!check_homogeneous(p, static_cast<unsigned>(std::max(p.degree(), 0))))
        throw std::domain_error("dehomogenize: input not homogeneous");
    return p.substitute_const(var, coeff_traits<C>::one());
}

/// Reinsert a variable at position var with exponents filling total degree d.
template <class C>
MultiPoly<C> homogenize(const MultiPoly<C>& p, int var, unsigned d) {
    MultiPoly<C> r(p.nvars() + 1);
    for (const auto& [e, c] : p.terms()) {
        unsigned td = total_degree(e);
        if (td > d) throw std::domain_error("homogenize: degree exceeds target");
        Exponents ne;
        ne.reserve(e.size() + 1);
        for (int j = 0; j <= p.nvars(); ++j) {
            if (j < var)
                ne.push_back(e[static_cast<std::size_t>(j)]);
            else if (j == var)
                ne.push_back(d - td);
            else
                ne.push_back(e[static_cast<std::size_t>(j - 1)]);
        }
        r.add_term(ne, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Canonical rendering. Terms in descending graded-lex order; coefficients in
// the "a/b+c/d*i" shape with zero parts omitted; mixed Gaussian coefficients
// parenthesized. parse(render(p)) == p.
// ---------------------------------------------------------------------------

inline std::string render_monomial(const Exponents& e, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s;
}

inline std::string render_poly(const PolyQ& p, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != p.nvars())
        throw std::invalid_argument("render_poly: name count mismatch");
    if (p.is_zero()) return "0";
    std::string out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        std::string mono = render_monomial(e, names);
        bool mixed = c.re != 0 && c.im != 0;
        std::string body;
        bool negative = false;
        if (mixed) {
            body = "(" + c.str() + ")";
        } else {
            GaussRat a = c;
            if ((c.re != 0 && c.re < 0) || (c.re == 0 && c.im < 0)) {
                negative = true;
                a = -a;
            }
            body = a.str();
            if (body == "1" && !mono.empty()) body.clear();
        }
        std::string term = body;
        if (!mono.empty()) {
            if (!term.empty()) term += "*";
            term += mono;
        }
        if (out.empty())
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

}  // namespace k3cert

#endif
