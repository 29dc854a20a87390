#include "bclab/powersum.hpp"

#include "bclab/errors.hpp"
#include "bclab/level_cache.hpp"
#include "detail/int128.hpp"
#include "detail/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace bclab {

namespace {

constexpr std::array<int, 2> kBinary{0, 1};
constexpr std::array<int, 3> kSigned{-1, 0, 1};

}  // namespace

int alphabet_size(DigitAlphabet a) { return a == DigitAlphabet::Binary ? 2 : 3; }

std::span<const int> alphabet_digits(DigitAlphabet a) {
    if (a == DigitAlphabet::Binary) return kBinary;
    return kSigned;
}

std::string to_string(DigitAlphabet a) { return a == DigitAlphabet::Binary ? "01" : "-101"; }

DigitAlphabet parse_alphabet(const std::string& text) {
    if (text == "01" || text == "binary" || text == "0,1") return DigitAlphabet::Binary;
    if (text == "-101" || text == "signed" || text == "-1,0,1") return DigitAlphabet::Signed;
    fail(ErrorCode::InvalidArgument, "unknown digit alphabet '" + text + "'");
}

void Witness::set(int k, int digit) {
    const std::uint64_t bit = std::uint64_t{1} << k;
    plus &= ~bit;
    minus &= ~bit;
    if (digit > 0) plus |= bit;
    if (digit < 0) minus |= bit;
}

bool lex_less(const Witness& a, const Witness& b) {
    const std::uint64_t diff = (a.plus ^ b.plus) | (a.minus ^ b.minus);
    if (diff == 0) return false;
    const int k = std::countr_zero(diff);
    return a.digit(k) < b.digit(k);
}

QPoly LevelSet::residue(std::size_t i) const {
    QPoly out;
    for (__int128 c : scaled_residue(i)) {
        mpq_class q(detail::to_mpz(c), scale_);
        q.canonicalize();
        out.push_back(q);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

std::vector<int> LevelSet::witness(std::size_t i) const {
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) out[static_cast<std::size_t>(k)] = witness_[i].digit(k);
    return out;
}

std::uint64_t LevelSet::total_multiplicity() const {
    return std::accumulate(mult_.begin(), mult_.end(), std::uint64_t{0});
}

int initial_sort_bits(const AlgebraicNumber& a, int n) {
    const double m = std::max(1.0, a.mahler().value + a.mahler().error);
    return std::max(128, static_cast<int>(std::ceil(n * std::log2(m))) + 64);
}

// Builds levels digit by digit and certifies their order.
class LevelBuilder {
public:
    LevelBuilder(const ThetaField& field, int n, DigitAlphabet alphabet, long first_exponent, int threads)
        : field_(field), n_(n), alphabet_(alphabet), e0_(first_exponent), threads_(std::max(1, threads)) {
        d_ = field.degree();
        lc_ = field.number().minpoly().leading();
        // Level k keys are scaled by lc^max(0, e0 + k - d), which clears the
        // denominators of theta^e mod p for every e < e0 + k.
        scales_.push_back(level_scale(0));
        mpz_class bound = 0;
        shifts_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(d_), 0);
        for (int k = 0; k < n; ++k) {
            scales_.push_back(level_scale(k + 1));
            const mpz_class& sk = scales_.back();
            QPoly r = field.theta_power(first_exponent + k);
            mpz_class largest = 0;
            for (std::size_t j = 0; j < r.size(); ++j) {
                mpq_class v = r[j] * sk;
                v.canonicalize();
                if (v.get_den() != 1) fail(ErrorCode::InvalidArgument, "residue scale is not integral");
                auto c = detail::to_int128(v.get_num());
                if (!c) fail(ErrorCode::BudgetExceeded, "residue keys exceed 128-bit range");
                shifts_[static_cast<std::size_t>(k) * static_cast<std::size_t>(d_) + j] = *c;
                largest = std::max(largest, mpz_class(abs(v.get_num())));
            }
            bound = bound * (sk / scales_[static_cast<std::size_t>(k)]) + largest;
        }
        if (mpz_sizeinbase(bound.get_mpz_t(), 2) > 125)
            fail(ErrorCode::BudgetExceeded, "residue keys exceed 128-bit range");
        lc128_ = *detail::to_int128(lc_);
    }

    LevelSet empty_level() const {
        LevelSet out;
        out.n_ = 0;
        out.alphabet_ = alphabet_;
        out.first_exponent_ = e0_;
        out.d_ = d_;
        out.scale_ = scales_[0];
        out.keys_.assign(static_cast<std::size_t>(d_), 0);
        out.mult_.push_back(1);
        out.witness_.push_back({});
        return out;
    }

    LevelSet extend(const LevelSet& prev) const;
    void sort(LevelSet& level) const;
    // Value enclosures of every entry at the given precision, in storage order.
    std::vector<Enclosure> values(const LevelSet& level, int bits) const;

    bool compatible(const LevelSet& l) const {
        return l.n_ <= n_ && l.d_ == d_ && l.scale_ == scales_[static_cast<std::size_t>(l.n_)];
    }
    static void drop_values(LevelSet& l) { l.values_.clear(); }
    static void set_origin(LevelSet& l) { l.values_.assign(1, Enclosure{0, 0, 0}); }

private:
    const ThetaField& field_;
    int n_;
    DigitAlphabet alphabet_;
    long e0_;
    int threads_;
    int d_ = 1;
    mpz_class lc_;
    __int128 lc128_ = 1;
    std::vector<mpz_class> scales_;
    std::vector<__int128> shifts_;

    mpz_class level_scale(int k) const {
        mpz_class s = 1;
        for (long e = d_; e <= e0_ + k - 1; ++e) s *= lc_;
        return s;
    }
};

namespace {

std::uint64_t hash_key(const __int128* key, int d) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (int j = 0; j < d; ++j) {
        const auto u = static_cast<unsigned __int128>(key[j]);
        h = detail::mix64(h ^ static_cast<std::uint64_t>(u));
        h = detail::mix64(h ^ static_cast<std::uint64_t>(u >> 64));
    }
    return h;
}

// One shard of the deduplicated next level.
struct Shard {
    int d = 1;
    std::vector<__int128> keys;
    std::vector<std::uint64_t> mult;
    std::vector<Witness> witness;
    std::vector<std::uint64_t> hashes;
    std::vector<std::uint32_t> slots;  // entry index + 1, 0 when empty

    std::size_t size() const { return mult.size(); }

    void grow() {
        std::size_t cap = std::max<std::size_t>(64, slots.size() * 2);
        slots.assign(cap, 0);
        for (std::size_t i = 0; i < size(); ++i) place(i);
    }

    void place(std::size_t i) {
        const std::size_t mask = slots.size() - 1;
        std::size_t pos = hashes[i] & mask;
        while (slots[pos] != 0) pos = (pos + 1) & mask;
        slots[pos] = static_cast<std::uint32_t>(i + 1);
    }

    void insert(const __int128* key, std::uint64_t h, std::uint64_t m, const Witness& w) {
        if ((size() + 1) * 2 > slots.size()) grow();
        const std::size_t mask = slots.size() - 1;
        std::size_t pos = h & mask;
        while (slots[pos] != 0) {
            const std::size_t i = slots[pos] - 1;
            if (hashes[i] == h && std::equal(key, key + d, keys.begin() + static_cast<std::ptrdiff_t>(i * d))) {
                mult[i] += m;
                if (lex_less(w, witness[i])) witness[i] = w;
                return;
            }
            pos = (pos + 1) & mask;
        }
        if (size() >= 0xffffffffULL) fail(ErrorCode::BudgetExceeded, "level too large");
        keys.insert(keys.end(), key, key + d);
        mult.push_back(m);
        witness.push_back(w);
        hashes.push_back(h);
        slots[pos] = static_cast<std::uint32_t>(size());
    }
};

}  // namespace

LevelSet LevelBuilder::extend(const LevelSet& prev) const {
    const int k = prev.n_;  // 0-based position of the new digit
    const __int128* shift = shifts_.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(d_);
    const auto digits = alphabet_digits(alphabet_);
    const int shards = threads_;
    const __int128 ratio = scales_[static_cast<std::size_t>(k + 1)] == scales_[static_cast<std::size_t>(k)] ? 1 : lc128_;
    std::vector<Shard> out(static_cast<std::size_t>(shards));
    detail::parallel_for(shards, shards, [&](int t) {
        Shard& s = out[static_cast<std::size_t>(t)];
        s.d = d_;
        std::vector<__int128> key(static_cast<std::size_t>(d_));
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const __int128* base = prev.keys_.data() + i * static_cast<std::size_t>(d_);
            for (int a : digits) {
                for (int j = 0; j < d_; ++j) key[static_cast<std::size_t>(j)] = ratio * base[j] + a * shift[j];
                const std::uint64_t h = hash_key(key.data(), d_);
                if (shards > 1 && static_cast<int>(h % static_cast<std::uint64_t>(shards)) != t) continue;
                Witness w = prev.witness_[i];
                w.set(k, a);
                s.insert(key.data(), h, prev.mult_[i], w);
            }
        }
        s.slots.clear();
        s.slots.shrink_to_fit();
        s.hashes.clear();
        s.hashes.shrink_to_fit();
    });
    LevelSet next;
    next.n_ = k + 1;
    next.alphabet_ = alphabet_;
    next.first_exponent_ = e0_;
    next.d_ = d_;
    next.scale_ = scales_[static_cast<std::size_t>(k + 1)];
    std::size_t total = 0;
    for (const auto& s : out) total += s.size();
    next.keys_.reserve(total * static_cast<std::size_t>(d_));
    next.mult_.reserve(total);
    next.witness_.reserve(total);
    for (auto& s : out) {
        next.keys_.insert(next.keys_.end(), s.keys.begin(), s.keys.end());
        next.mult_.insert(next.mult_.end(), s.mult.begin(), s.mult.end());
        next.witness_.insert(next.witness_.end(), s.witness.begin(), s.witness.end());
        s = Shard{};
    }
    return next;
}

std::vector<Enclosure> LevelBuilder::values(const LevelSet& level, int bits) const {
    const int n = level.n_;
    std::vector<Enclosure> pw;
    pw.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) pw.push_back(field_.enclose_power(static_cast<int>(e0_ + k), bits));
    std::vector<Enclosure> out(level.size());
    const std::size_t total = level.size();
    const int chunks = threads_;
    detail::parallel_for(chunks, threads_, [&](int t) {
        const std::size_t begin = total * static_cast<std::size_t>(t) / static_cast<std::size_t>(chunks);
        const std::size_t end = total * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(chunks);
        for (std::size_t i = begin; i < end; ++i) {
            Enclosure e{0, 0, bits};
            const Witness& w = level.witness_[i];
            for (int k = 0; k < n; ++k) {
                const int a = w.digit(k);
                if (a > 0) {
                    e.lo += pw[static_cast<std::size_t>(k)].lo;
                    e.hi += pw[static_cast<std::size_t>(k)].hi;
                } else if (a < 0) {
                    e.lo -= pw[static_cast<std::size_t>(k)].hi;
                    e.hi -= pw[static_cast<std::size_t>(k)].lo;
                }
            }
            out[i] = std::move(e);
        }
    });
    return out;
}

void LevelBuilder::sort(LevelSet& level) const {
    const std::size_t total = level.size();
    const int start = initial_sort_bits(field_.number(), static_cast<int>(std::max<long>(1, e0_ + level.n_ - 1)));
    for (int bits = start; bits <= 16 * start; bits *= 2) {
        std::vector<Enclosure> vals = values(level, bits);
        std::vector<std::uint32_t> order(total);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
            const int c = cmp(vals[x].lo, vals[y].lo);
            if (c != 0) return c < 0;
            return x < y;
        });
        bool ok = true;
        for (std::size_t i = 0; i + 1 < total && ok; ++i) ok = vals[order[i]].hi < vals[order[i + 1]].lo;
        if (!ok) continue;
        std::vector<__int128> keys(level.keys_.size());
        std::vector<std::uint64_t> mult(total);
        std::vector<Witness> wit(total);
        std::vector<Enclosure> sorted(total);
        const auto d = static_cast<std::size_t>(d_);
        for (std::size_t i = 0; i < total; ++i) {
            const std::size_t src = order[i];
            std::copy_n(level.keys_.begin() + static_cast<std::ptrdiff_t>(src * d), d,
                        keys.begin() + static_cast<std::ptrdiff_t>(i * d));
            mult[i] = level.mult_[src];
            wit[i] = level.witness_[src];
            sorted[i] = std::move(vals[src]);
        }
        level.keys_ = std::move(keys);
        level.mult_ = std::move(mult);
        level.witness_ = std::move(wit);
        level.values_ = std::move(sorted);
        level.precision_bits_ = bits;
        return;
    }
    fail(ErrorCode::PrecisionExhausted, "level " + std::to_string(level.n_) + " values not separated at " +
                                            std::to_string(16 * start) + " bits");
}

namespace {

void check_budget(int n, DigitAlphabet alphabet, const EnumerationOptions& opts) {
    if (n < 0) fail(ErrorCode::InvalidArgument, "level must be nonnegative");
    if (n > 63) fail(ErrorCode::BudgetExceeded, "level exceeds 63 digits");
    const double strings = std::pow(static_cast<double>(alphabet_size(alphabet)), n);
    if (strings > static_cast<double>(opts.budget))
        fail(ErrorCode::BudgetExceeded, std::to_string(alphabet_size(alphabet)) + "^" + std::to_string(n) +
                                            " digit strings exceed budget " + std::to_string(opts.budget));
}

}  // namespace

void enumerate_levels(const ThetaField& field, int n, DigitAlphabet alphabet, long first_exponent,
                      const EnumerationOptions& opts, bool sort_each,
                      const std::function<void(const LevelSet&)>& visit) {
    check_budget(n, alphabet, opts);
    LevelBuilder builder(field, n, alphabet, first_exponent, opts.threads);
    const IntPolynomial& p = field.number().minpoly();
    LevelSet level = builder.empty_level();
    for (int k = 1; k <= n; ++k) {
        std::optional<LevelSet> cached;
        if (opts.cache) cached = opts.cache->load(p, k, alphabet, first_exponent);
        if (cached && builder.compatible(*cached)) {
            level = std::move(*cached);
        } else {
            level = builder.extend(level);
            if (opts.cache) opts.cache->store(p, level);
        }
        if (sort_each) builder.sort(level);
        visit(level);
        if (sort_each) LevelBuilder::drop_values(level);
    }
}

LevelSet enumerate_level(const ThetaField& field, int n, DigitAlphabet alphabet, long first_exponent,
                         const EnumerationOptions& opts) {
    check_budget(n, alphabet, opts);
    const IntPolynomial& p = field.number().minpoly();
    LevelBuilder builder(field, n, alphabet, first_exponent, opts.threads);
    if (opts.cache) {
        if (auto cached = opts.cache->load(p, n, alphabet, first_exponent)) {
            if (builder.compatible(*cached)) {
                if (n > 0) builder.sort(*cached);
                return std::move(*cached);
            }
        }
    }
    LevelSet level = builder.empty_level();
    for (int k = 1; k <= n; ++k) level = builder.extend(level);
    if (n == 0) {
        LevelBuilder::set_origin(level);
    } else {
        builder.sort(level);
    }
    if (opts.cache) opts.cache->store(p, level);
    return level;
}

LevelSet enumerate_level(const AlgebraicNumber& a, int n, DigitAlphabet alphabet, const EnumerationOptions& opts) {
    ThetaField field(a);
    return enumerate_level(field, n, alphabet, 1, opts);
}

std::uint64_t count_distinct(const AlgebraicNumber& a, int n, DigitAlphabet alphabet, const EnumerationOptions& opts) {
    if (n == 0) return 1;
    ThetaField field(a);
    std::uint64_t count = 0;
    enumerate_levels(field, n, alphabet, 1, opts, false, [&](const LevelSet& l) {
        if (l.level() == n) count = l.size();
    });
    return count;
}

GrowthReport growth_report(const AlgebraicNumber& a, int n_max, double epsilon, const EnumerationOptions& opts,
                           const std::function<void(const GrowthRow&)>& on_row) {
    GrowthReport rep;
    rep.epsilon = epsilon;
    rep.theta = a.theta_approx();
    rep.mahler = a.mahler();
    ThetaField field(a);
    const double log_theta = std::log(rep.theta);
    enumerate_levels(field, n_max, DigitAlphabet::Binary, 1, opts, false, [&](const LevelSet& l) {
        GrowthRow row;
        row.n = l.level();
        row.d_n = l.size();
        row.root = std::exp(std::log(static_cast<double>(row.d_n)) / row.n);
        row.c_n = std::exp(std::log(static_cast<double>(row.d_n)) - row.n * log_theta);
        row.in_sandwich = row.root >= rep.theta - epsilon && row.root <= rep.mahler.value + rep.mahler.error + epsilon;
        rep.rows.push_back(row);
        if (on_row) on_row(row);
    });
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].d_n < rep.rows[i - 1].d_n) rep.nondecreasing = false;
        if (rep.rows[i].c_n < rep.rows[i - 1].c_n) rep.c_nondecreasing = false;
    }
    for (int n = 1; n <= n_max; ++n) {
        for (int k = 1; n + k <= n_max; ++k) {
            const auto dn = static_cast<unsigned __int128>(rep.rows[static_cast<std::size_t>(n - 1)].d_n);
            const auto dk = static_cast<unsigned __int128>(rep.rows[static_cast<std::size_t>(k - 1)].d_n);
            if (rep.rows[static_cast<std::size_t>(n + k - 1)].d_n > dn * dk) {
                rep.subadditive = false;
                rep.subadditivity_violations.emplace_back(n, k);
            }
        }
    }
    return rep;
}

namespace {

BoundedReal bounded_between(const mpz_class& lo, const mpz_class& hi, int bits) {
    return Enclosure{lo, hi, bits}.bounded();
}

GapRow gap_row(const ThetaField& field, const LevelSet& l) {
    GapRow row;
    row.n = l.level();
    row.count = l.size();
    const std::size_t m = l.size();
    if (m < 2) return row;
    const int bits = l.value(0).bits;
    mpz_class min_hi, min_lo, max_hi, max_lo;
    std::vector<mpz_class> lows(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        mpz_class lo = l.value(i + 1).lo - l.value(i).hi;
        mpz_class hi = l.value(i + 1).hi - l.value(i).lo;
        if (i == 0 || hi < min_hi) min_hi = hi;
        if (i == 0 || lo < min_lo) min_lo = lo;
        if (i == 0 || hi > max_hi) max_hi = hi;
        if (i == 0 || lo > max_lo) max_lo = lo;
        lows[i] = std::move(lo);
    }
    row.min_gap = bounded_between(min_lo, min_hi, bits);
    row.max_gap = bounded_between(max_lo, max_hi, bits);
    // Exact minimum among the gaps that could attain it.
    const auto d = static_cast<std::size_t>(l.degree());
    std::vector<__int128> best;
    std::size_t best_i = m;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (lows[i] > min_hi) continue;
        std::vector<__int128> diff(d);
        auto a = l.scaled_residue(i + 1);
        auto b = l.scaled_residue(i);
        for (std::size_t j = 0; j < d; ++j) diff[j] = a[j] - b[j];
        if (best_i == m) {
            best = diff;
            best_i = i;
            continue;
        }
        if (diff == best) continue;
        ThetaField::Element x, y;
        for (std::size_t j = 0; j < d; ++j) {
            x.push_back(mpq_class(detail::to_mpz(diff[j]), l.residue_scale()));
            y.push_back(mpq_class(detail::to_mpz(best[j]), l.residue_scale()));
        }
        if (field.compare(field.reduce(x), field.reduce(y)) < 0) {
            best = diff;
            best_i = i;
        }
    }
    ThetaField::Element g;
    for (std::size_t j = 0; j < d; ++j) g.push_back(mpq_class(detail::to_mpz(best[j]), l.residue_scale()));
    row.min_gap_exact = field.reduce(g);
    return row;
}

}  // namespace

GapSeries gap_series(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts,
                     const std::function<void(const GapRow&)>& on_row) {
    GapSeries out;
    ThetaField field(a);
    enumerate_levels(field, n_max, DigitAlphabet::Signed, 1, opts, true, [&](const LevelSet& l) {
        out.rows.push_back(gap_row(field, l));
        if (on_row) on_row(out.rows.back());
    });
    if (out.rows.empty()) return out;
    out.constant_tail_start = out.rows.back().n;
    bool tail = true;
    for (std::size_t i = out.rows.size(); i-- > 1;) {
        const auto& cur = out.rows[i].min_gap_exact;
        const auto& prev = out.rows[i - 1].min_gap_exact;
        const bool equal = cur == prev;
        const int c = equal ? 0 : field.compare(cur, prev);
        if (c > 0) out.monotone = false;
        if (c >= 0) out.strictly_decreasing = false;
        if (tail && equal) {
            out.constant_tail_start = out.rows[i - 1].n;
        } else {
            tail = false;
        }
    }
    out.ell_proxy = out.rows.back().min_gap;
    const std::size_t half = out.rows.size() / 2;
    out.big_l_proxy = out.rows[half].max_gap;
    for (std::size_t i = half; i < out.rows.size(); ++i)
        if (out.rows[i].max_gap.value > out.big_l_proxy.value) out.big_l_proxy = out.rows[i].max_gap;
    return out;
}

EntropyReport garsia_entropy(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts,
                             const std::function<void(const EntropyRow&)>& on_row) {
    EntropyReport rep;
    ThetaField field(a);
    const long double log_theta = std::log(static_cast<long double>(a.theta_approx()));
    enumerate_levels(field, n_max, DigitAlphabet::Binary, 1, opts, false, [&](const LevelSet& l) {
        const int n = l.level();
        std::map<std::uint64_t, std::uint64_t> profile;
        for (std::size_t i = 0; i < l.size(); ++i) ++profile[l.multiplicity(i)];
        std::uint64_t total = 0;
        long double h = 0.0L;
        const long double strings = std::ldexp(1.0L, n);
        for (const auto& [m, count] : profile) {
            total += m * count;
            const long double p = static_cast<long double>(m) / strings;
            h += static_cast<long double>(count) * p * (static_cast<long double>(n) * std::log(2.0L) -
                                                        std::log(static_cast<long double>(m)));
        }
        if (total != (std::uint64_t{1} << n)) fail(ErrorCode::InvalidArgument, "multiplicities do not sum to 2^n");
        EntropyRow row;
        row.n = n;
        const long double value = h / (static_cast<long double>(n) * log_theta);
        row.entropy = {static_cast<double>(value), 1e-14 * static_cast<double>(value) + 1e-15};
        row.dim_estimate = std::min(row.entropy.value, 1.0);
        row.distinct = l.size();
        rep.rows.push_back(row);
        if (on_row) on_row(row);
    });
    return rep;
}

GapReductionReport gap_reduction_check(const AlgebraicNumber& a, int n_max, const EnumerationOptions& opts) {
    AlgebraicNumber root = square_root(a);
    GapReductionReport rep{root, gap_series(a, n_max, opts), gap_series(root, n_max, opts)};
    const auto& tg = rep.theta_gaps.rows;
    const auto& rg = rep.root_gaps.rows;
    for (int n = 1; 2 * n <= n_max; ++n) {
        const auto& gt = tg[static_cast<std::size_t>(n - 1)].min_gap;
        const auto& gr = rg[static_cast<std::size_t>(2 * n - 1)].min_gap;
        if (gr.value - gr.error > gt.value + gt.error) rep.root_dominates = false;
    }
    if (!tg.empty() && tg.front().min_gap.value > 0) rep.theta_decay = tg.back().min_gap.value / tg.front().min_gap.value;
    if (!rg.empty() && rg.front().min_gap.value > 0) rep.root_decay = rg.back().min_gap.value / rg.front().min_gap.value;
    return rep;
}

}  // namespace bclab
