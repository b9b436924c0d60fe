#ifndef K3CERT_RATIONAL_HPP
#define K3CERT_RATIONAL_HPP

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace k3cert {

using Complex = std::complex<double>;

/// Gaussian rational a + b*i with exact arbitrary-precision components.
/// mpq_class keeps both parts in canonical reduced form, so operator== is
/// exact field equality.
struct GaussRat {
    mpq_class re;
    mpq_class im;

    GaussRat() : re(0), im(0) {}
    GaussRat(long r) : re(r), im(0) {}
    GaussRat(const mpq_class& r) : re(r), im(0) {}
    GaussRat(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long rn, long rd, long in_, long id) : re(rn, rd), im(in_, id) {
        re.canonicalize();
        im.canonicalize();
    }

    static GaussRat zero() { return GaussRat(); }
    static GaussRat one() { return GaussRat(1); }
    static GaussRat imag_unit() { return GaussRat(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    bool is_one() const { return im == 0 && re == 1; }

    GaussRat conj() const { return GaussRat(re, -im); }
    /// |z|^2 = re^2 + im^2, exact and rational.
    mpq_class norm2() const { return re * re + im * im; }

    GaussRat operator-() const { return GaussRat(-re, -im); }

    GaussRat& operator+=(const GaussRat& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussRat& operator-=(const GaussRat& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussRat& operator*=(const GaussRat& o) {
        mpq_class r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    GaussRat& operator/=(const GaussRat& o) {
        if (o.is_zero()) throw std::domain_error("GaussRat: division by zero");
        mpq_class n = o.norm2();
        mpq_class r = (re * o.re + im * o.im) / n;
        im = (im * o.re - re * o.im) / n;
        re = std::move(r);
        return *this;
    }

    friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
    friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
    friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
    friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    GaussRat inverse() const {
        if (is_zero()) throw std::domain_error("GaussRat: inverse of zero");
        mpq_class n = norm2();
        return GaussRat(re / n, -im / n);
    }

    Complex to_complex() const { return Complex(re.get_d(), im.get_d()); }

    /// Canonical string: "0", "3", "-1/2", "i", "2i", "2/3*i", "1/2-2/3*i".
    /// Integer imaginary parts render as "2i" (a single lexer token); fractional
    /// ones as "2/3*i" so that "2/3i" never appears (it would parse as 2/(3i)).
    std::string str() const {
        auto rat = [](const mpq_class& q) {
            std::ostringstream os;
            os << q;
            return os.str();
        };
        auto imag_body = [&](const mpq_class& q) -> std::string {
            mpq_class a = abs(q);
            if (a == 1) return "i";
            if (a.get_den() == 1) return rat(a) + "i";
            return rat(a) + "*i";
        };
        if (is_zero()) return "0";
        std::string s;
        if (re != 0) {
            s += rat(re);
            if (im > 0)
                s += "+" + imag_body(im);
            else if (im < 0)
                s += "-" + imag_body(im);
        } else {
            if (im < 0) s += "-";
            s += imag_body(im);
        }
        return s;
    }
};

inline double abs_value(const GaussRat& g) {
    return std::abs(g.to_complex());
}

/// Nearest rational with denominator <= max_den (continued-fraction
/// reconstruction). Used to recognize exact witnesses from polished floats.
inline mpq_class rational_reconstruct(double x, unsigned long max_den = 64) {
    if (!std::isfinite(x)) throw std::domain_error("rational_reconstruct: non-finite");
    mpq_class exact(x);  // exact binary value
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpq_class rem = exact;
    for (int it = 0; it < 64; ++it) {
        mpz_class a = rem.get_num() / rem.get_den();  // floor for nonneg; fix below
        if (rem < 0 && mpq_class(a) != rem) a -= 1;
        mpz_class p2 = a * p1 + p0;
        mpz_class q2 = a * q1 + q0;
        if (q2 > static_cast<long>(max_den)) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        mpq_class frac = rem - mpq_class(a);
        if (frac == 0) break;
        rem = mpq_class(1) / frac;
    }
    if (q1 == 0) return mpq_class(0);
    mpq_class out(p1, q1);
    out.canonicalize();
    return out;
}

inline GaussRat gauss_reconstruct(const Complex& z, unsigned long max_den = 64) {
    return GaussRat(rational_reconstruct(z.real(), max_den),
                    rational_reconstruct(z.imag(), max_den));
}

}  // namespace k3cert

#endif
