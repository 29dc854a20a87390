#pragma once

#include "bclab/polynomial.hpp"

#include <gmpxx.h>

#include <cmath>

namespace bclab::detail {

inline double scaled_to_double(const mpz_class& m, int scale) {
    if (m == 0) return 0.0;
    long e = 0;
    double d = mpz_get_d_2exp(&e, m.get_mpz_t());
    return std::ldexp(d, static_cast<int>(e) - scale);
}

inline mpz_class long_double_to_fixed(long double x, int scale) {
    if (x == 0 || !std::isfinite(x)) return 0;
    int e = 0;
    long double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 62));
    mpz_class r = static_cast<long>(mant);
    const int shift = e - 62 + scale;
    if (shift >= 0) r <<= static_cast<unsigned>(shift);
    else mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    return r;
}

struct Fx {
    mpz_class re;
    mpz_class im;
};

// Complex fixed point with implicit scale 2^bits.
class FixedComplex {
public:
    explicit FixedComplex(int bits) : bits_(bits) { one_ = mpz_class(1) << static_cast<unsigned>(bits); }

    int bits() const { return bits_; }
    Fx one() const { return {one_, 0}; }

    Fx mul(const Fx& a, const Fx& b) const {
        Fx r{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
        shr(r.re);
        shr(r.im);
        return r;
    }

    // a / b; b must be nonzero.
    Fx div(const Fx& a, const Fx& b) const {
        mpz_class den = b.re * b.re + b.im * b.im;
        mpz_class nre = (a.re * b.re + a.im * b.im) << static_cast<unsigned>(bits_);
        mpz_class nim = (a.im * b.re - a.re * b.im) << static_cast<unsigned>(bits_);
        Fx r;
        mpz_fdiv_q(r.re.get_mpz_t(), nre.get_mpz_t(), den.get_mpz_t());
        mpz_fdiv_q(r.im.get_mpz_t(), nim.get_mpz_t(), den.get_mpz_t());
        return r;
    }

    // p(z) and p'(z) by Horner.
    void eval(const ZPoly& p, const Fx& z, Fx& value, Fx& deriv) const {
        const int d = zpoly::degree(p);
        value = {p[static_cast<std::size_t>(d)] << static_cast<unsigned>(bits_), 0};
        deriv = {0, 0};
        for (int k = d - 1; k >= 0; --k) {
            deriv = mul(deriv, z);
            deriv.re += value.re;
            deriv.im += value.im;
            value = mul(value, z);
            value.re += p[static_cast<std::size_t>(k)] << static_cast<unsigned>(bits_);
        }
    }

private:
    void shr(mpz_class& v) const { mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(bits_)); }
    int bits_;
    mpz_class one_;
};

}  // namespace bclab::detail
