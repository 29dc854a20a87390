#include "bclab/measure.hpp"

#include "bclab/errors.hpp"
#include "detail/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace bclab {

namespace {

struct ElementLess {
    bool operator()(const ThetaField::Element& x, const ThetaField::Element& y) const {
        if (x.size() != y.size()) return x.size() < y.size();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const int c = cmp(x[i], y[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

ThetaField::Element constant(long c) {
    if (c == 0) return {};
    return {mpq_class(c)};
}

double to_double(const mpq_class& q) { return q.get_d(); }

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    if (v.size() % 2 == 1) return v[h];
    if (std::isinf(v[h])) return v[h];
    return 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

ThetaField::Element NetLevel::point(const ThetaField& field, std::size_t i) const {
    return field.mul(sums.residue(i), field.theta_power(-n));
}

Enclosure NetLevel::enclose(const ThetaField& field, std::size_t i, int bits) const {
    return field.enclose(point(field, i), bits);
}

std::vector<int> NetLevel::digits(std::size_t i) const {
    std::vector<int> w = sums.witness(i);
    std::reverse(w.begin(), w.end());
    return w;
}

NetLevel net_level(const ThetaField& field, int n, const EnumerationOptions& opts) {
    NetLevel out;
    out.n = n;
    out.sums = enumerate_level(field, n, DigitAlphabet::Binary, 0, opts);
    return out;
}

CylinderCounter::CylinderCounter(const ThetaField& field, int depth, const EnumerationOptions& opts)
    : field_(field), net_(net_level(field, depth, opts)), theta_m_(field.theta_power(depth)) {
    prefix_.assign(net_.size() + 1, 0);
    for (std::size_t i = 0; i < net_.size(); ++i) prefix_[i + 1] = prefix_[i] + net_.sums.multiplicity(i);
}

std::size_t CylinderCounter::lower_index(const ThetaField::Element& x, bool strict) const {
    const LevelSet& s = net_.sums;
    const Enclosure ex = field_.enclose(x, s.value(0).bits);
    // -1, 0, 1 for sum_i <, ==, > x
    auto side = [&](std::size_t i) {
        const Enclosure& v = s.value(i);
        if (v.hi < ex.lo) return -1;
        if (v.lo > ex.hi) return 1;
        return field_.compare(s.residue(i), x);
    };
    std::size_t lo = 0, hi = s.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const int c = side(mid);
        const bool beyond = strict ? c > 0 : c >= 0;
        if (beyond) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return lo;
}

std::uint64_t CylinderCounter::count(const ThetaField::Element& lo, bool lo_strict, const ThetaField::Element& hi,
                                     bool hi_strict) const {
    const std::size_t i0 = lower_index(lo, lo_strict);
    const std::size_t i1 = lower_index(hi, !hi_strict);
    return i1 > i0 ? prefix_[i1] - prefix_[i0] : 0;
}

MeasureBound CylinderCounter::bounds(const ThetaField::Element& left, const ThetaField::Element& right) const {
    if (field_.compare(left, right) > 0) fail(ErrorCode::InvalidArgument, "interval endpoints out of order");
    const auto& t = field_.support_end();
    const auto a = field_.mul(theta_m_, left);
    const auto b = field_.mul(theta_m_, right);
    MeasureBound out;
    out.depth = net_.n;
    out.lower_count = count(a, true, field_.sub(b, t), true);
    out.upper_count = count(field_.sub(a, t), false, b, false);
    const mpz_class total = mpz_class(1) << static_cast<unsigned>(net_.n);
    out.lower = mpq_class(mpz_class(static_cast<unsigned long>(out.lower_count)), total);
    out.upper = mpq_class(mpz_class(static_cast<unsigned long>(out.upper_count)), total);
    out.lower.canonicalize();
    out.upper.canonicalize();
    return out;
}

MeasureBound measure_bounds(const ThetaField& field, const ThetaField::Element& left, const ThetaField::Element& right,
                            int depth, const EnumerationOptions& opts) {
    CylinderCounter counter(field, depth, opts);
    return counter.bounds(left, right);
}

LocalDimProfile local_dimension_profile(const AlgebraicNumber& a, int n, int depth, const EnumerationOptions& opts,
                                        int guard, const std::function<void(const LocalDimSample&)>& on_sample) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "level must be at least 1");
    if (depth < n + guard)
        fail(ErrorCode::InvalidArgument, "depth " + std::to_string(depth) + " is below level + guard " +
                                             std::to_string(n + guard));
    ThetaField field(a);
    const NetLevel net = net_level(field, n, opts);
    const CylinderCounter counter(field, depth, opts);
    const ClassificationReport cls = classify(a);

    LocalDimProfile out;
    out.n = n;
    out.depth = depth;
    LocalDimSummary& sum = out.summary;
    sum.d_n = net.size();
    const double theta = a.theta_approx();
    const double mahler_n = std::pow(a.mahler().value, n);
    const double n_s = std::pow(static_cast<double>(n), a.s());
    const double salem_scale = std::pow(theta, n) * std::pow(static_cast<double>(n), a.degree() / 2.0 - 1.0);

    std::vector<double> lows, highs;
    bool first = true;
    ThetaField::Element left = net.point(field, 0);
    for (std::size_t i = 0; i + 1 < net.size(); ++i) {
        LocalDimSample smp;
        smp.left = left;
        smp.right = net.point(field, i + 1);
        left = smp.right;
        smp.length = field.enclose(field.sub(smp.right, smp.left), 128).bounded();
        smp.measure = counter.bounds(smp.left, smp.right);
        const double lo = to_double(smp.measure.lower);
        const double up = to_double(smp.measure.upper);
        const double len_lo = smp.length.value - smp.length.error;
        const double len_hi = smp.length.value + smp.length.error;
        smp.defined = up > 0 && len_hi < 1;
        if (smp.defined) {
            smp.ratio_low = std::log(up) / std::log(len_lo);
            smp.ratio_high = lo > 0 ? std::log(lo) / std::log(len_hi) : std::numeric_limits<double>::infinity();
            lows.push_back(smp.ratio_low);
            highs.push_back(smp.ratio_high);
            const double scale = smp.length.value * std::fabs(std::log(smp.length.value));
            const double lmin = lo / scale, lmax = up / scale;
            if (!sum.log_statistic_min || lmin < *sum.log_statistic_min) sum.log_statistic_min = lmin;
            if (!sum.log_statistic_max || lmax > *sum.log_statistic_max) sum.log_statistic_max = lmax;
            sum.log_sign_flag = true;
        }
        const double sl = lo * mahler_n * n_s;
        const double su = up * static_cast<double>(sum.d_n);
        if (first || sl < sum.sandwich_lower_min) sum.sandwich_lower_min = sl;
        if (first || su > sum.sandwich_upper_max) sum.sandwich_upper_max = su;
        if (cls.is_salem) {
            const double st = lo * salem_scale;
            if (!sum.salem_statistic || st < *sum.salem_statistic) sum.salem_statistic = st;
        }
        first = false;
        if (on_sample) on_sample(smp);
        out.samples.push_back(std::move(smp));
    }
    if (!lows.empty()) {
        sum.min_ratio_low = *std::min_element(lows.begin(), lows.end());
        sum.median_ratio_low = median(lows);
        sum.median_ratio_high = median(highs);
    }
    return out;
}

BranchingResult branching_count(const ThetaField& field, std::span<const int> x_digits, int n_max, int guard,
                                std::uint64_t budget) {
    const int length = static_cast<int>(x_digits.size());
    if (n_max < 0 || n_max > length - guard)
        fail(ErrorCode::InvalidArgument, "level " + std::to_string(n_max) + " exceeds digit length " +
                                             std::to_string(length) + " minus guard " + std::to_string(guard));
    if (n_max > 62 || (std::uint64_t{1} << n_max) > budget)
        fail(ErrorCode::BudgetExceeded, "2^" + std::to_string(n_max) + " branches exceed budget");
    for (int d : x_digits)
        if (d != 0 && d != 1) fail(ErrorCode::InvalidArgument, "digits must be 0 or 1");

    BranchingResult out;
    out.x_digits.assign(x_digits.begin(), x_digits.end());
    std::vector<int> reversed(out.x_digits.rbegin(), out.x_digits.rend());
    out.x = field.digits_value(reversed, -length);

    const auto theta = field.theta_power(1);
    const auto& t = field.support_end();
    const double log_theta = std::log(field.number().theta_approx());
    std::map<ThetaField::Element, std::uint64_t, ElementLess> states{{out.x, 1}};
    for (int n = 1; n <= n_max; ++n) {
        std::map<ThetaField::Element, std::uint64_t, ElementLess> next;
        std::uint64_t beta = 0;
        for (const auto& [r, c] : states) {
            const auto shifted = field.mul(theta, r);
            for (int a = 0; a <= 1; ++a) {
                auto rn = field.sub(shifted, constant(a));
                if (field.sign(rn) < 0 || field.compare(rn, t) > 0) continue;
                next[std::move(rn)] += c;
                beta += c;
            }
        }
        states = std::move(next);
        out.max_states = std::max(out.max_states, states.size());
        out.beta.push_back(beta);
        out.growth.push_back(beta > 0 ? std::log(static_cast<double>(beta)) / (n * log_theta)
                                      : -std::numeric_limits<double>::infinity());
    }
    return out;
}

std::vector<int> sample_digits(std::uint64_t seed, std::uint64_t index, int length) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    std::mt19937_64 rng(z);
    std::vector<int> out(static_cast<std::size_t>(length));
    for (auto& d : out) d = static_cast<int>(rng() >> 63);
    return out;
}

BranchingGrowthReport branching_growth(const AlgebraicNumber& a, int samples, int length, int n_max,
                                       std::uint64_t seed, const EnumerationOptions& opts, int guard,
                                       const std::function<void(const BranchingGrowthRow&)>& on_row) {
    if (samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
    ThetaField field(a);
    BranchingGrowthReport rep;
    rep.samples = samples;
    rep.length = length;
    rep.seed = seed;
    rep.results.resize(static_cast<std::size_t>(samples));
    detail::parallel_for(samples, opts.threads, [&](int i) {
        const auto x = sample_digits(seed, static_cast<std::uint64_t>(i), length);
        rep.results[static_cast<std::size_t>(i)] = branching_count(field, x, n_max, guard, opts.budget);
    });
    std::vector<std::optional<double>> dims(static_cast<std::size_t>(n_max));
    try {
        EnumerationOptions eopts = opts;
        eopts.cache = nullptr;
        const auto ent = garsia_entropy(a, n_max, eopts);
        for (const auto& row : ent.rows) dims[static_cast<std::size_t>(row.n - 1)] = row.dim_estimate;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExceeded) throw;
    }
    for (int n = 1; n <= n_max; ++n) {
        BranchingGrowthRow row;
        row.n = n;
        double total = 0.0;
        bool first = true;
        for (const auto& r : rep.results) {
            const double g = r.growth[static_cast<std::size_t>(n - 1)];
            total += g;
            if (first || g < row.min) row.min = g;
            if (first || g > row.max) row.max = g;
            first = false;
        }
        row.mean = total / samples;
        row.dim_estimate = dims[static_cast<std::size_t>(n - 1)];
        rep.rows.push_back(row);
        if (on_row) on_row(row);
    }
    if (!rep.rows.empty() && rep.rows.back().dim_estimate)
        rep.agreement_gap = std::fabs(rep.rows.back().mean - *rep.rows.back().dim_estimate);
    return rep;
}

std::vector<DensityRow> density_profile(const AlgebraicNumber& a, const std::vector<ThetaField::Element>& points,
                                        const std::vector<int>& m_list, const EnumerationOptions& opts, int guard,
                                        const std::function<void(const DensityRow&)>& on_row) {
    ThetaField field(a);
    std::vector<DensityRow> out;
    for (int m : m_list) {
        if (m < 0) fail(ErrorCode::InvalidArgument, "radius exponent must be nonnegative");
        const CylinderCounter counter(field, m + guard, opts);
        const auto r = field.theta_power(-m);
        const double radius = std::pow(a.theta_approx(), -m);
        for (std::size_t i = 0; i < points.size(); ++i) {
            DensityRow row;
            row.point = i;
            row.m = m;
            row.radius = radius;
            row.measure = counter.bounds(field.sub(points[i], r), field.add(points[i], r));
            row.density_low = to_double(row.measure.lower) / (2 * radius);
            row.density_high = to_double(row.measure.upper) / (2 * radius);
            if (on_row) on_row(row);
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace bclab
