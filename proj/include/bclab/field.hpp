#pragma once

#include "bclab/algebraic.hpp"

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <span>

namespace bclab {

// Certified real interval [lo, hi] * 2^-bits.
struct Enclosure {
    mpz_class lo;
    mpz_class hi;
    int bits = 0;

    double approx() const;
    double width() const;  // rounded up
    BoundedReal bounded() const;
    Enclosure rescaled(int new_bits) const;  // new_bits >= bits
};

// -1 / +1 when the enclosures are certified ordered, 0 when they overlap.
int compare(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);

// Exact arithmetic in Q(theta): elements are remainders modulo the minimal
// polynomial (rational coefficients, ascending, trimmed), so equality of
// values is equality of representations.
class ThetaField {
public:
    using Element = QPoly;

    explicit ThetaField(const AlgebraicNumber& a);

    const AlgebraicNumber& number() const { return a_; }
    int degree() const { return a_.degree(); }

    Element reduce(QPoly q) const;
    Element add(const Element& x, const Element& y) const;
    Element sub(const Element& x, const Element& y) const;
    Element mul(const Element& x, const Element& y) const;
    Element scale(const Element& x, const mpq_class& c) const;
    // theta^k for any integer k.
    Element theta_power(long k) const;
    // 1 / (theta - 1), the right end of the support of the Bernoulli convolution.
    const Element& support_end() const { return support_end_; }
    // sum_j digits[j] * theta^(first_exponent + j)
    Element digits_value(std::span<const int> digits, long first_exponent) const;

    Enclosure enclose(const Element& x, int bits) const;
    // theta^k for k >= 0.
    Enclosure enclose_power(int k, int bits) const;
    int sign(const Element& x) const;
    int compare(const Element& x, const Element& y) const { return sign(sub(x, y)); }
    double approx(const Element& x) const { return enclose(x, 64).approx(); }

    static constexpr int kMaxSignBits = 1 << 16;

private:
    struct Powers {
        int bits = 0;
        std::vector<mpz_class> lo;
        std::vector<mpz_class> hi;
    };
    std::shared_ptr<const Powers> powers(int bits, int max_exponent) const;

    AlgebraicNumber a_;
    Element inv_theta_;
    Element support_end_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<const Powers>> cache_;
};

std::string element_to_string(const ThetaField::Element& x);

}  // namespace bclab
