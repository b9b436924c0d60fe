#ifndef K3CERT_PARSE_HPP
#define K3CERT_PARSE_HPP

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "k3cert/multipoly.hpp"

namespace k3cert {

/// Parse failure with the byte position of the offending token.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(std::string msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

namespace detail {

// Recursive-descent parser for the polynomial grammar:
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := ('+'|'-') factor | primary ('^' UINT)?
//   primary := UINT | UINTi | 'i' | IDENT | '(' expr ')'
// Coefficients: integers, a/b rationals via '/', the literal i, and
// parenthesized Gaussian combinations like (1+2i)/3. "12i" is a single
// imaginary literal; implicit multiplication is rejected. '/' requires a
// nonzero constant divisor.
class PolyParser {
  public:
    PolyParser(const std::string& text, const std::vector<std::string>& var_names)
        : text_(text) {
        for (std::size_t i = 0; i < var_names.size(); ++i) {
            if (var_names[i] == "i")
                throw std::invalid_argument("parse_poly: 'i' is reserved for the imaginary unit");
            vars_[var_names[i]] = static_cast<int>(i);
        }
        nvars_ = static_cast<int>(var_names.size());
    }

    PolyQ run() {
        skip_ws();
        PolyQ p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

  private:
    const std::string& text_;
    std::map<std::string, int> vars_;
    int nvars_ = 0;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool consume(char c) {
        skip_ws();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    PolyQ expr() {
        PolyQ acc = term();
        for (;;) {
            skip_ws();
            if (consume('+'))
                acc += term();
            else if (consume('-'))
                acc -= term();
            else
                return acc;
        }
    }

    PolyQ term() {
        PolyQ acc = factor();
        for (;;) {
            skip_ws();
            if (consume('*')) {
                acc *= factor();
            } else if (consume('/')) {
                std::size_t at = pos_;
                PolyQ d = factor();
                if (!d.is_constant()) throw ParseError("division by a non-constant", at);
                GaussRat c = d.constant_value();
                if (c.is_zero()) throw ParseError("division by zero", at);
                acc.scale(c.inverse());
            } else {
                return acc;
            }
        }
    }

    PolyQ factor() {
        skip_ws();
        if (consume('-')) return -factor();
        if (consume('+')) return factor();
        PolyQ base = primary();
        skip_ws();
        if (consume('^')) {
            skip_ws();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer exponent");
            unsigned long k = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                k = k * 10 + static_cast<unsigned long>(peek() - '0');
                if (k > 1000) fail("exponent too large");
                ++pos_;
            }
            return base.pow(static_cast<unsigned>(k));
        }
        return base;
    }

    PolyQ primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            PolyQ p = expr();
            skip_ws();
            if (!consume(')')) fail("expected ')'");
            return p;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("expected a number, variable or '('");
    }

    PolyQ number() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        mpz_class n(text_.substr(start, pos_ - start));
        bool imag = false;
        // "12i" is one imaginary literal provided 'i' is not the start of an
        // identifier like "i2" (digits cannot start identifiers, so only a
        // following alphanumeric continuation blocks it).
        if (peek() == 'i') {
            char after = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
            if (!std::isalnum(static_cast<unsigned char>(after)) && after != '_') {
                imag = true;
                ++pos_;
            }
        }
        GaussRat val = imag ? GaussRat(mpq_class(0), mpq_class(n)) : GaussRat(mpq_class(n));
        return PolyQ::constant(nvars_, val);
    }

    PolyQ identifier() {
        std::size_t start = pos_;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "i") return PolyQ::constant(nvars_, GaussRat::imag_unit());
        auto it = vars_.find(name);
        if (it == vars_.end()) throw ParseError("unknown variable '" + name + "'", start);
        return PolyQ::variable(nvars_, it->second);
    }
};

}  // namespace detail

/// Parse an arithmetic expression over the listed variables into canonical
/// expanded form. Round-trips with render_poly.
inline PolyQ parse_poly(const std::string& text, const std::vector<std::string>& var_names) {
    return detail::PolyParser(text, var_names).run();
}

/// Parse a single Gaussian-rational value ("1/2", "3+2i", "-2/3*i", ...).
inline GaussRat parse_gauss_rat(const std::string& text) {
    PolyQ p = parse_poly(text, {});
    return p.constant_value();
}

}  // namespace k3cert

#endif
