#pragma once

#include "bclab/algebraic.hpp"
#include "bclab/field.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace bclab {

class LevelCache;

enum class DigitAlphabet { Binary, Signed };  // {0,1} and {-1,0,1}

int alphabet_size(DigitAlphabet a);
std::span<const int> alphabet_digits(DigitAlphabet a);
std::string to_string(DigitAlphabet a);
DigitAlphabet parse_alphabet(const std::string& text);

// Packed digit string; position k (0-based) has digit +1, -1 or 0.
struct Witness {
    std::uint64_t plus = 0;
    std::uint64_t minus = 0;

    int digit(int k) const { return static_cast<int>(plus >> k & 1) - static_cast<int>(minus >> k & 1); }
    void set(int k, int digit);
};

// Lexicographic order of digit strings (first digit most significant, -1 < 0 < 1).
bool lex_less(const Witness& a, const Witness& b);

struct EnumerationOptions {
    std::uint64_t budget = std::uint64_t{1} << 26;  // max |alphabet|^n digit strings
    int threads = 1;
    const LevelCache* cache = nullptr;
};

// Deduplicated level-n power-sum set sum_{k=1..n} a_k theta^(first_exponent + k - 1),
// keyed by exact residues modulo the minimal polynomial. Residues are stored
// scaled by residue_scale() so that they are integral.
class LevelSet {
public:
    int level() const { return n_; }
    DigitAlphabet alphabet() const { return alphabet_; }
    long first_exponent() const { return first_exponent_; }
    int degree() const { return d_; }
    std::size_t size() const { return mult_.size(); }
    bool sorted() const { return !values_.empty() || mult_.empty(); }

    std::span<const __int128> scaled_residue(std::size_t i) const {
        return {keys_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
    }
    const mpz_class& residue_scale() const { return scale_; }
    // Canonical residue with exact rational coefficients.
    QPoly residue(std::size_t i) const;
    std::uint64_t multiplicity(std::size_t i) const { return mult_[i]; }
    const Witness& packed_witness(std::size_t i) const { return witness_[i]; }
    // Lexicographically least digit string a_1..a_n reaching this value.
    std::vector<int> witness(std::size_t i) const;
    // Only for sorted sets; enclosures are pairwise disjoint and increasing.
    const Enclosure& value(std::size_t i) const { return values_[i]; }
    int precision_bits() const { return precision_bits_; }
    std::uint64_t total_multiplicity() const;

private:
    friend class LevelBuilder;
    friend class LevelCache;
    int n_ = 0;
    DigitAlphabet alphabet_ = DigitAlphabet::Binary;
    long first_exponent_ = 1;
    int d_ = 1;
    mpz_class scale_ = 1;
    std::vector<__int128> keys_;
    std::vector<std::uint64_t> mult_;
    std::vector<Witness> witness_;
    std::vector<Enclosure> values_;
    int precision_bits_ = 0;
};

// Starting precision for sorting level n: max(128, ceil(n log2 M) + 64) bits.
int initial_sort_bits(const AlgebraicNumber& a, int n);

// Levels 1..n over exponents first_exponent.., built incrementally; visit is
// called once per level (sorted when sort_each is set).
void enumerate_levels(const ThetaField& field, int n, DigitAlphabet alphabet, long first_exponent,
                      const EnumerationOptions& opts, bool sort_each,
                      const std::function<void(const LevelSet&)>& visit);

// Sorted level n with exponents 1..n (the set D_n for {0,1}).
LevelSet enumerate_level(const AlgebraicNumber& a, int n, DigitAlphabet alphabet, const EnumerationOptions& opts = {});
LevelSet enumerate_level(const ThetaField& field, int n, DigitAlphabet alphabet, long first_exponent,
                         const EnumerationOptions& opts = {});

std::uint64_t count_distinct(const AlgebraicNumber& a, int n, DigitAlphabet alphabet,
                             const EnumerationOptions& opts = {});

struct GrowthRow {
    int n = 0;
    std::uint64_t d_n = 0;
    double root = 0.0;  // d_n^(1/n)
    double c_n = 0.0;   // d_n / theta^n
    bool in_sandwich = false;
};

struct GrowthReport {
    std::vector<GrowthRow> rows;  // n = 1..n_max
    bool nondecreasing = true;
    bool subadditive = true;
    std::vector<std::pair<int, int>> subadditivity_violations;
    bool c_nondecreasing = true;
    double epsilon = 0.0;
    double theta = 0.0;
    BoundedReal mahler;
};

GrowthReport growth_report(const AlgebraicNumber& a, int n_max, double epsilon = 0.02,
                           const EnumerationOptions& opts = {},
                           const std::function<void(const GrowthRow&)>& on_row = {});

struct GapRow {
    int n = 0;
    std::size_t count = 0;
    BoundedReal min_gap;
    BoundedReal max_gap;
    ThetaField::Element min_gap_exact;
};

struct GapSeries {
    std::vector<GapRow> rows;  // n = 1..n_max
    bool monotone = true;      // g_{n+1} <= g_n everywhere
    bool strictly_decreasing = true;
    // First n from which g_n is exactly constant through n_max.
    int constant_tail_start = 0;
    BoundedReal ell_proxy;  // g at n_max
    BoundedReal big_l_proxy;  // max G_n over the second half of the range
};

GapSeries gap_series(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts = {},
                     const std::function<void(const GapRow&)>& on_row = {});

struct EntropyRow {
    int n = 0;
    BoundedReal entropy;  // H_n
    double dim_estimate = 0.0;
    std::uint64_t distinct = 0;
};

struct EntropyReport {
    std::vector<EntropyRow> rows;  // n = 1..n_max
};

EntropyReport garsia_entropy(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts = {},
                             const std::function<void(const EntropyRow&)>& on_row = {});

struct GapReductionReport {
    AlgebraicNumber root;  // sqrt(theta)
    GapSeries theta_gaps;
    GapSeries root_gaps;
    // g_{2n}(sqrt theta) <= g_n(theta) wherever both are computed.
    bool root_dominates = true;
    double theta_decay = 0.0;  // g_{n_max} / g_1 for theta
    double root_decay = 0.0;
};

GapReductionReport gap_reduction_check(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts = {});

}  // namespace bclab
