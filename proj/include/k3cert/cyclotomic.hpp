#ifndef K3CERT_CYCLOTOMIC_HPP
#define K3CERT_CYCLOTOMIC_HPP

#include <array>
#include <cmath>
#include <string>

#include "k3cert/rational.hpp"

namespace k3cert {

/// Element of Q(i)[w]/(w^4 + 1): c[0] + c[1]*w + c[2]*w^2 + c[3]*w^3 with
/// Gaussian-rational coefficients and the rewrite rule w^4 = -1. Evaluating
/// w at the primitive eighth root of unity exp(i*pi/4) recovers the numeric
/// value. Ring operations only; no division is needed (the modulus splits
/// over Q(i), so the quotient is not a field).
struct Cyc4 {
    std::array<GaussRat, 4> c;

    Cyc4() = default;
    explicit Cyc4(GaussRat scalar) { c[0] = std::move(scalar); }
    static Cyc4 omega(int power = 1) {
        Cyc4 r;
        int p = ((power % 8) + 8) % 8;
        GaussRat unit = GaussRat::one();
        if (p >= 4) {
            p -= 4;
            unit = -unit;
        }
        r.c[static_cast<std::size_t>(p)] = unit;
        return r;
    }

    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }

    Cyc4 operator-() const {
        Cyc4 r;
        for (int k = 0; k < 4; ++k) r.c[k] = -c[k];
        return r;
    }
    Cyc4& operator+=(const Cyc4& o) {
        for (int k = 0; k < 4; ++k) c[k] += o.c[k];
        return *this;
    }
    Cyc4& operator-=(const Cyc4& o) {
        for (int k = 0; k < 4; ++k) c[k] -= o.c[k];
        return *this;
    }
    friend Cyc4 operator+(Cyc4 a, const Cyc4& b) { return a += b; }
    friend Cyc4 operator-(Cyc4 a, const Cyc4& b) { return a -= b; }
    friend Cyc4 operator*(const Cyc4& a, const Cyc4& b) {
        Cyc4 r;
        for (int k = 0; k < 4; ++k) {
            if (a.c[k].is_zero()) continue;
            for (int l = 0; l < 4; ++l) {
                if (b.c[l].is_zero()) continue;
                GaussRat prod = a.c[k] * b.c[l];
                int e = k + l;
                if (e >= 4) {
                    e -= 4;
                    prod = -prod;  // w^4 = -1
                }
                r.c[static_cast<std::size_t>(e)] += prod;
            }
        }
        return r;
    }
    Cyc4& operator*=(const Cyc4& o) { return *this = *this * o; }
    friend bool operator==(const Cyc4& a, const Cyc4& b) { return a.c == b.c; }
    friend bool operator!=(const Cyc4& a, const Cyc4& b) { return !(a == b); }

    Complex to_complex() const {
        const double s = std::sqrt(0.5);
        const Complex w(s, s);  // exp(i*pi/4)
        Complex acc(0, 0), wp(1, 0);
        for (int k = 0; k < 4; ++k) {
            acc += c[static_cast<std::size_t>(k)].to_complex() * wp;
            wp *= w;
        }
        return acc;
    }

    std::string str() const {
        static const char* pow_names[4] = {"", "w", "w^2", "w^3"};
        std::string s;
        for (int k = 0; k < 4; ++k) {
            if (c[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c[k].str() + ")";
            if (k > 0) s += std::string("*") + pow_names[k];
        }
        return s.empty() ? "0" : s;
    }
};

}  // namespace k3cert

#endif
