#pragma once

#include "bclab/algebraic.hpp"
#include "bclab/field.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace bclab {

constexpr int kDefaultTraceCap = 1000;

// tr(theta^n) for n = 1..N; t[n-1] holds t_n.
struct TraceSeries {
    std::vector<mpz_class> t;
};

// Newton identities, then the d-term recurrence. Throws NotMonic.
TraceSeries power_traces(const IntPolynomial& p, int N, int cap = kDefaultTraceCap);

// Per n: sum over conjugates outside the unit disc of |theta_j|^n, and of
// Re(theta_j^n) for comparison.
struct DominantPart {
    int bits = 0;
    std::vector<Enclosure> moduli;      // [n-1]
    std::vector<Enclosure> real_parts;  // [n-1]
};

DominantPart dominant_part(const AlgebraicNumber& a, int N, int cap = kDefaultTraceCap);

struct ResidualRow {
    int n = 0;
    mpz_class trace;
    BoundedReal dominant;
    BoundedReal residual;            // t_n - sum |theta_j|^n
    std::optional<BoundedReal> normalized;  // residual / n^(s/2), only when s > 0
    BoundedReal residual_real;       // t_n - sum Re(theta_j^n)
};

struct ResidualReport {
    int s = 0;
    std::vector<ResidualRow> rows;
    // max |r_n| / n^(s/2), or max |r_n| when s = 0
    double max_normalized = 0.0;
    double max_abs_residual = 0.0;
    double max_abs_residual_real = 0.0;
};

// Throws NotMonic, PrecisionExhausted.
ResidualReport trace_residual_report(const AlgebraicNumber& a, int N, int cap = kDefaultTraceCap);

struct PartialSumSeries {
    std::size_t conjugate = 0;  // index into AlgebraicNumber::conjugates()
    double argument = 0.0;
    std::vector<BoundedReal> sums;  // P_{j,n} = sum_{k<=n} Re(theta_j^k), [n-1]
    double exponent = 0.0;          // log-log slope of |P_{j,n}| over the tail half
    double sup = 0.0;
};

// One series per unit-circle conjugate. Throws NotSalem.
std::vector<PartialSumSeries> unit_circle_partial_sums(const AlgebraicNumber& a, int N, int cap = kDefaultTraceCap);

}  // namespace bclab
