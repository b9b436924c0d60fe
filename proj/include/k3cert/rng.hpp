#ifndef K3CERT_RNG_HPP
#define K3CERT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "k3cert/multipoly.hpp"

namespace k3cert {

/// Deterministic random source. All randomized routines thread one of these
/// explicitly so a fixed seed reproduces every draw bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    long uniform_int(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0;
        while (u <= 1e-300) u = uniform01();
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    Complex cgauss() { return Complex(gauss(), gauss()); }

    Complex unit_disk(double rmin = 0.2, double rmax = 1.2) {
        double r = uniform(rmin, rmax);
        double t = uniform(0, 2 * M_PI);
        return std::polar(r, t);
    }

    mpq_class small_rat(long max_num = 9, long max_den = 5) {
        mpq_class q(uniform_int(-max_num, max_num), uniform_int(1, max_den));
        q.canonicalize();
        return q;
    }

    GaussRat small_gauss_rat(long max_num = 9, long max_den = 5) {
        return GaussRat(small_rat(max_num, max_den), small_rat(max_num, max_den));
    }

    GaussRat small_gauss_int(long max_abs = 9) {
        return GaussRat(mpq_class(uniform_int(-max_abs, max_abs)),
                        mpq_class(uniform_int(-max_abs, max_abs)));
    }

    /// Haar-uniform rotation from a normalized quaternion.
    std::array<std::array<double, 3>, 3> so3() {
        double a = gauss(), b = gauss(), c = gauss(), d = gauss();
        double n = std::sqrt(a * a + b * b + c * c + d * d);
        a /= n;
        b /= n;
        c /= n;
        d /= n;
        return {{{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
                 {2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)},
                 {2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d}}};
    }

    std::array<double, 3> unit_sphere() {
        double x = gauss(), y = gauss(), z = gauss();
        double n = std::sqrt(x * x + y * y + z * z);
        while (n < 1e-12) {
            x = gauss();
            y = gauss();
            z = gauss();
            n = std::sqrt(x * x + y * y + z * z);
        }
        return {x / n, y / n, z / n};
    }

    /// Dense random polynomial of exact total degree <= deg (each monomial
    /// kept with the given probability, nonzero guaranteed).
    PolyQ random_poly(int nvars, unsigned deg, double keep = 0.5, long max_num = 5) {
        PolyQ p(nvars);
        Exponents e(static_cast<std::size_t>(nvars), 0);
        random_poly_rec(p, e, 0, deg, keep, max_num);
        if (p.is_zero()) p = PolyQ::constant(nvars, GaussRat(1));
        return p;
    }

    /// Random homogeneous polynomial of degree d, leading structure free.
    PolyQ random_homogeneous(int nvars, unsigned d, double keep = 0.6, long max_num = 5,
                             bool gauss_coeffs = true) {
        PolyQ p(nvars);
        Exponents e(static_cast<std::size_t>(nvars), 0);
        random_homog_rec(p, e, 0, d, keep, max_num, gauss_coeffs);
        if (p.is_zero())
            p.add_term(first_monomial(nvars, d), GaussRat(1));
        return p;
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;

    static Exponents first_monomial(int nvars, unsigned d) {
        Exponents e(static_cast<std::size_t>(nvars), 0);
        e[0] = d;
        return e;
    }

    void random_poly_rec(PolyQ& p, Exponents& e, int var, unsigned budget, double keep,
                         long max_num) {
        if (var == p.nvars()) {
            if (uniform01() < keep) {
                GaussRat c = small_gauss_int(max_num);
                if (!c.is_zero()) p.add_term(e, c);
            }
            return;
        }
        for (unsigned k = 0; k <= budget; ++k) {
            e[static_cast<std::size_t>(var)] = k;
            random_poly_rec(p, e, var + 1, budget - k, keep, max_num);
        }
        e[static_cast<std::size_t>(var)] = 0;
    }

    void random_homog_rec(PolyQ& p, Exponents& e, int var, unsigned budget, double keep,
                          long max_num, bool gauss_coeffs) {
        if (var == p.nvars() - 1) {
            e[static_cast<std::size_t>(var)] = budget;
            if (uniform01() < keep) {
                GaussRat c = gauss_coeffs ? small_gauss_rat(max_num) : small_gauss_int(max_num);
                if (!c.is_zero()) p.add_term(e, c);
            }
            e[static_cast<std::size_t>(var)] = 0;
            return;
        }
        for (unsigned k = 0; k <= budget; ++k) {
            e[static_cast<std::size_t>(var)] = k;
            random_homog_rec(p, e, var + 1, budget - k, keep, max_num, gauss_coeffs);
        }
        e[static_cast<std::size_t>(var)] = 0;
    }
};

}  // namespace k3cert

#endif
