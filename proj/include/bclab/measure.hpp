#pragma once

#include "bclab/powersum.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bclab {

// Sorted points sum_{k=1..n} a_k theta^-k, a_k in {0,1}. Stored as the level
// set over exponents 0..n-1; point i equals theta^-n times sums.value(i).
struct NetLevel {
    int n = 0;
    LevelSet sums;

    std::size_t size() const { return sums.size(); }
    ThetaField::Element point(const ThetaField& field, std::size_t i) const;
    Enclosure enclose(const ThetaField& field, std::size_t i, int bits) const;
    // Digits a_1..a_n of a representation of point i.
    std::vector<int> digits(std::size_t i) const;
};

NetLevel net_level(const ThetaField& field, int n, const EnumerationOptions& opts = {});

// lower <= mu_theta(J) <= upper, both multiples of 2^-depth.
struct MeasureBound {
    int depth = 0;
    std::uint64_t lower_count = 0;
    std::uint64_t upper_count = 0;
    mpq_class lower;
    mpq_class upper;
};

// Counts depth-m cylinders [S, S + theta^-m / (theta - 1)] against intervals.
class CylinderCounter {
public:
    CylinderCounter(const ThetaField& field, int depth, const EnumerationOptions& opts = {});

    int depth() const { return net_.n; }
    const NetLevel& net() const { return net_; }
    // Closed interval [left, right]; a cylinder touching an endpoint counts
    // toward upper only.
    MeasureBound bounds(const ThetaField::Element& left, const ThetaField::Element& right) const;

private:
    // Number of prefixes with scaled sum in the given range.
    std::uint64_t count(const ThetaField::Element& lo, bool lo_strict, const ThetaField::Element& hi,
                        bool hi_strict) const;
    // First index whose sum is > x (strict) or >= x.
    std::size_t lower_index(const ThetaField::Element& x, bool strict) const;

    const ThetaField& field_;
    NetLevel net_;
    std::vector<std::uint64_t> prefix_;
    ThetaField::Element theta_m_;
};

MeasureBound measure_bounds(const ThetaField& field, const ThetaField::Element& left,
                            const ThetaField::Element& right, int depth, const EnumerationOptions& opts = {});

struct LocalDimSample {
    ThetaField::Element left;
    ThetaField::Element right;
    BoundedReal length;
    MeasureBound measure;
    bool defined = false;  // upper > 0 and |J| < 1
    double ratio_low = 0.0;
    double ratio_high = 0.0;  // +inf when lower == 0
};

struct LocalDimSummary {
    std::uint64_t d_n = 0;
    double min_ratio_low = 0.0;
    double median_ratio_low = 0.0;
    double median_ratio_high = 0.0;
    // min over J of lower(mu(J)) * M^n * n^s
    double sandwich_lower_min = 0.0;
    // max over J of upper(mu(J)) * d_n
    double sandwich_upper_max = 0.0;
    // min over J of lower(mu(J)) * theta^n * n^(d/2 - 1); Salem inputs only
    std::optional<double> salem_statistic;
    // mu(J) / (|J| |log |J||) over J, from the lower and upper bounds
    std::optional<double> log_statistic_min;
    std::optional<double> log_statistic_max;
    bool log_sign_flag = false;  // the right side log|J| is negative
};

struct LocalDimProfile {
    int n = 0;
    int depth = 0;
    std::vector<LocalDimSample> samples;  // one per gap of the level-n net
    LocalDimSummary summary;
};

LocalDimProfile local_dimension_profile(const AlgebraicNumber& a, int n, int depth, const EnumerationOptions& opts = {},
                                        int guard = 8,
                                        const std::function<void(const LocalDimSample&)>& on_sample = {});

struct BranchingResult {
    std::vector<int> x_digits;  // x = sum_k x_k theta^-k
    ThetaField::Element x;
    std::vector<std::uint64_t> beta;  // beta[n-1] for n = 1..n_max
    std::vector<double> growth;       // log(beta_n) / (n log theta)
    std::size_t max_states = 0;
};

// beta_n = #{a_1..a_n : 0 <= theta^n (x - sum a_k theta^-k) <= 1/(theta-1)},
// computed breadth first with equal residuals merged.
BranchingResult branching_count(const ThetaField& field, std::span<const int> x_digits, int n_max, int guard = 8,
                                std::uint64_t budget = std::uint64_t{1} << 26);

// Fair {0,1} digits for sample `index`; independent of thread schedule.
std::vector<int> sample_digits(std::uint64_t seed, std::uint64_t index, int length);

struct BranchingGrowthRow {
    int n = 0;
    double mean = 0.0;  // mean of log(beta_n) / (n log theta)
    double min = 0.0;
    double max = 0.0;
    std::optional<double> dim_estimate;  // min{H_n, 1}
};

struct BranchingGrowthReport {
    int samples = 0;
    int length = 0;
    std::uint64_t seed = 0;
    std::vector<BranchingGrowthRow> rows;
    std::optional<double> agreement_gap;  // |mean - dim_estimate| at n_max
    std::vector<BranchingResult> results;
};

BranchingGrowthReport branching_growth(const AlgebraicNumber& a, int samples, int length, int n_max,
                                       std::uint64_t seed, const EnumerationOptions& opts = {}, int guard = 8,
                                       const std::function<void(const BranchingGrowthRow&)>& on_row = {});

struct DensityRow {
    std::size_t point = 0;
    int m = 0;
    double radius = 0.0;  // theta^-m
    MeasureBound measure;
    double density_low = 0.0;
    double density_high = 0.0;
};

// For each point x and radius theta^-m: bounds of mu([x - r, x + r]) / 2r at
// counting depth m + guard.
std::vector<DensityRow> density_profile(const AlgebraicNumber& a, const std::vector<ThetaField::Element>& points,
                                        const std::vector<int>& m_list, const EnumerationOptions& opts = {},
                                        int guard = 8, const std::function<void(const DensityRow&)>& on_row = {});

}  // namespace bclab
