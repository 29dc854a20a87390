#pragma once

#include "bclab/polynomial.hpp"

#include <gmpxx.h>

#include <complex>
#include <vector>

namespace bclab {

enum class Side { Below, Above, Undecided };

// Disc {z : |z - center| <= radius} with center (re + i*im) / 2^scale and
// radius / 2^scale an upper bound. Produced only by isolate_roots, which
// certifies that the disc holds exactly one root.
struct RootEnclosure {
    mpz_class re;
    mpz_class im;
    mpz_class radius;
    int scale = 0;
    bool is_real = false;

    std::complex<double> center() const;
    double radius_upper() const;
    mpq_class re_q() const;
    mpq_class im_q() const;
    mpq_class radius_q() const;
    // |z| versus rho for every z in the disc; rho >= 0.
    Side modulus_vs(const mpq_class& rho) const;
};

struct RootOptions {
    int max_bits = 1 << 14;
};

// Certified isolation of all complex roots of a squarefree p. Enclosures are
// pairwise disjoint, real roots have im == 0 and is_real set, non-real
// enclosures miss the real axis and come in conjugate pairs, and
// radius <= 2^(1-bits) * max(1, |center|). Sorted by real part descending,
// then imaginary part descending.
std::vector<RootEnclosure> isolate_roots(const ZPoly& p, int bits, const RootOptions& opts = {});

// Dyadic interval [lo, hi] / 2^scale containing exactly one real root.
struct RealBracket {
    mpz_class lo;
    mpz_class hi;
    int scale = 0;

    mpq_class lo_q() const;
    mpq_class hi_q() const;
    double approx() const;
    // True when the width is at most 2^-bits.
    bool narrower_than(int bits) const;
};

// Sign of p(m / 2^scale), exact.
int sign_at(const ZPoly& p, const mpz_class& m, int scale);

RealBracket bracket_of(const RootEnclosure& real_root);
// Shrinks b to width <= 2^-bits; b must hold a simple root with a sign
// change across it (or be degenerate at an exact root).
RealBracket refine_real_root(const ZPoly& p, RealBracket b, int bits);

}  // namespace bclab
