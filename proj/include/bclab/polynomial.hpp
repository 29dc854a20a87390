#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bclab {

// Dense integer polynomial, ascending powers, no normalization. Used as the
// scratch type for exact arithmetic; IntPolynomial is the normalized public one.
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

namespace zpoly {

void trim(ZPoly& p);
void trim(QPoly& p);
int degree(const ZPoly& p);  // -1 for the zero polynomial
ZPoly add(const ZPoly& a, const ZPoly& b);
ZPoly sub(const ZPoly& a, const ZPoly& b);
ZPoly mul(const ZPoly& a, const ZPoly& b);
ZPoly derivative(const ZPoly& p);
mpz_class content(const ZPoly& p);
// Divides out the content and makes the leading coefficient positive.
ZPoly primitive(const ZPoly& p);
// Exact division in Z[x]; returns false when b does not divide a.
bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr);
// Primitive gcd over Q[x], sign-normalized.
ZPoly gcd(const ZPoly& a, const ZPoly& b);
QPoly to_q(const ZPoly& p);
// Remainder of a modulo b over Q[x].
QPoly rem(QPoly a, const ZPoly& b);
// p(x^2)
ZPoly substitute_square(const ZPoly& p);
mpq_class evaluate(const ZPoly& p, const mpq_class& x);
std::string to_string(const ZPoly& p);

}  // namespace zpoly

// Integer polynomial of degree >= 1 with content 1 and positive leading
// coefficient. The representation is canonical, so equality is structural.
class IntPolynomial {
public:
    static IntPolynomial from_ascending(ZPoly coeffs);
    static IntPolynomial from_descending(std::vector<mpz_class> coeffs);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const ZPoly& ascending() const { return coeffs_; }
    std::vector<mpz_class> descending() const;
    const mpz_class& coeff(int power) const { return coeffs_[static_cast<std::size_t>(power)]; }
    const mpz_class& leading() const { return coeffs_.back(); }
    const mpz_class& constant_term() const { return coeffs_.front(); }

    bool is_monic() const { return leading() == 1; }
    mpz_class height() const;
    // Palindromic coefficient sequence.
    bool is_reciprocal() const;
    // p(x) = q(x^2): every odd-power coefficient vanishes.
    bool has_only_even_powers() const;

    std::string to_string() const;
    std::string to_csv() const;  // "1,-1,-1"

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    explicit IntPolynomial(ZPoly coeffs) : coeffs_(std::move(coeffs)) {}
    ZPoly coeffs_;
};

// Accepts "1,-1,-1" (degree-descending list) or an expression in x with
// integer coefficients using + - * ^ and parentheses, e.g. "x^2 - x - 1".
IntPolynomial parse_polynomial(std::string_view text);

}  // namespace bclab
