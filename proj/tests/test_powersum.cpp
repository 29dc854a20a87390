#include "bclab/errors.hpp"
#include "bclab/level_cache.hpp"
#include "bclab/powersum.hpp"

#include "numbers.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace bclab;

namespace {

AlgebraicNumber number(const char* poly) { return make_algebraic(parse_polynomial(poly)); }

std::vector<int> digits_of(DigitAlphabet a) {
    const auto d = alphabet_digits(a);
    return {d.begin(), d.end()};
}

}  // namespace

TEST_CASE("alphabets") {
    CHECK(alphabet_size(DigitAlphabet::Binary) == 2);
    CHECK(alphabet_size(DigitAlphabet::Signed) == 3);
    CHECK(parse_alphabet("01") == DigitAlphabet::Binary);
    CHECK(parse_alphabet("-101") == DigitAlphabet::Signed);
    CHECK_THROWS_AS(parse_alphabet("012"), Error);
}

TEST_CASE("witness packing and order") {
    Witness a, b;
    a.set(0, -1);
    a.set(3, 1);
    CHECK(a.digit(0) == -1);
    CHECK(a.digit(3) == 1);
    CHECK(a.digit(1) == 0);
    b.set(0, 0);
    CHECK(lex_less(a, b));
    CHECK_FALSE(lex_less(b, a));
    a.set(0, 0);
    CHECK(a.digit(0) == 0);
}

TEST_CASE("level multiplicities match a 512-bit brute-force dedup") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto a = number(num.poly);
        const auto theta = oracle::real_root(a.minpoly(), num.theta);
        for (auto alphabet : {DigitAlphabet::Binary, DigitAlphabet::Signed}) {
            for (int n = 1; n <= 7; ++n) {
                CAPTURE(n);
                const auto l = enumerate_level(a, n, alphabet);
                const auto ref = oracle::brute_level(theta, n, digits_of(alphabet));
                REQUIRE(l.size() == ref.mult.size());
                for (std::size_t i = 0; i < l.size(); ++i) {
                    CHECK(l.multiplicity(i) == ref.mult[i]);
                    CHECK(l.value(i).bounded().contains(ref.values[i]));
                }
            }
        }
    }
}

TEST_CASE("witness evaluates to its sum and is lexicographically least") {
    const auto a = number("x^2-x-1");
    ThetaField field(a);
    const int n = 6;
    const auto l = enumerate_level(a, n, DigitAlphabet::Signed);
    // brute force: the first digit string in lex order reaching each residue
    std::vector<std::vector<int>> first(l.size());
    std::vector<int> idx(n, 0);
    const int total = 729;
    for (int s = 0; s < total; ++s) {
        std::vector<int> digits(n);
        int rest = s;
        for (int k = n - 1; k >= 0; --k) {
            digits[k] = rest % 3 - 1;
            rest /= 3;
        }
        const auto v = field.digits_value(digits, 1);
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (field.compare(v, l.residue(i)) == 0) {
                if (first[i].empty()) first[i] = digits;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
        CAPTURE(i);
        CHECK(l.witness(i) == first[i]);
        CHECK(field.compare(field.digits_value(l.witness(i), 1), l.residue(i)) == 0);
    }
}

TEST_CASE("golden d_n is F_{n+3} - 1") {
    const auto a = number("x^2-x-1");
    std::uint64_t f1 = 1, f2 = 2;  // F_2, F_3
    const auto rep = growth_report(a, 14);
    for (const auto& row : rep.rows) {
        const std::uint64_t f3 = f1 + f2;
        CHECK(row.d_n == f3 - 1);
        f1 = f2;
        f2 = f3;
    }
    CHECK(rep.subadditive);
    CHECK(rep.nondecreasing);
}

TEST_CASE("non-integer 3/2: all sums distinct") {
    const auto a = number("2x-3");
    for (int n = 1; n <= 12; ++n) CHECK(count_distinct(a, n, DigitAlphabet::Binary) == (std::uint64_t{1} << n));
}

TEST_CASE("total multiplicity is |A|^n") {
    const auto a = number("x^3-x-2");
    CHECK(enumerate_level(a, 8, DigitAlphabet::Binary).total_multiplicity() == 256);
    CHECK(enumerate_level(a, 6, DigitAlphabet::Signed).total_multiplicity() == 729);
}

TEST_CASE("levels are identical for any thread count") {
    const auto a = number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    EnumerationOptions one, many;
    many.threads = 4;
    const auto x = enumerate_level(a, 11, DigitAlphabet::Signed, one);
    const auto y = enumerate_level(a, 11, DigitAlphabet::Signed, many);
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x.multiplicity(i) == y.multiplicity(i));
        CHECK(x.packed_witness(i).plus == y.packed_witness(i).plus);
        CHECK(x.packed_witness(i).minus == y.packed_witness(i).minus);
        CHECK(x.residue(i) == y.residue(i));
    }
}

TEST_CASE("budget") {
    const auto a = number("x^2-x-1");
    EnumerationOptions small;
    small.budget = 1024;
    CHECK_NOTHROW(enumerate_level(a, 10, DigitAlphabet::Binary, small));
    try {
        enumerate_level(a, 11, DigitAlphabet::Binary, small);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("subadditivity on all reference numbers") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto rep = growth_report(number(num.poly), 12);
        CHECK(rep.subadditive);
        for (std::size_t n = 0; n < rep.rows.size(); ++n)
            for (std::size_t k = 0; n + k + 1 < rep.rows.size(); ++k)
                CHECK(rep.rows[n + k + 1].d_n <= rep.rows[n].d_n * rep.rows[k].d_n);
    }
}

TEST_CASE("gap series against brute-force consecutive differences") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto a = number(num.poly);
        const auto theta = oracle::real_root(a.minpoly(), num.theta);
        const auto s = gap_series(a, 7);
        for (const auto& row : s.rows) {
            CAPTURE(row.n);
            const auto ref = oracle::brute_level(theta, row.n, {-1, 0, 1});
            double lo = INFINITY, hi = 0;
            for (std::size_t i = 1; i < ref.values.size(); ++i) {
                lo = std::min(lo, ref.values[i] - ref.values[i - 1]);
                hi = std::max(hi, ref.values[i] - ref.values[i - 1]);
            }
            CHECK(row.count == ref.values.size());
            CHECK(row.min_gap.value == doctest::Approx(lo).epsilon(1e-9));
            CHECK(row.max_gap.value == doctest::Approx(hi).epsilon(1e-9));
        }
    }
}

TEST_CASE("golden gap series is eventually theta^-2") {
    const auto s = gap_series(number("x^2-x-1"), 10);
    CHECK(s.monotone);
    CHECK(s.constant_tail_start == 4);
    CHECK(s.ell_proxy.contains((3.0 - std::sqrt(5.0)) / 2.0));
}

TEST_CASE("entropy of 3/2 is log_theta 2 and golden entropy is nonincreasing") {
    const auto e = garsia_entropy(number("2x-3"), 10);
    for (const auto& r : e.rows) CHECK(std::fabs(r.entropy.value - std::log(2.0) / std::log(1.5)) < 1e-12);

    const auto g = garsia_entropy(number("x^2-x-1"), 12);
    for (std::size_t i = 1; i < g.rows.size(); ++i)
        CHECK(g.rows[i].entropy.value <= g.rows[i - 1].entropy.value + g.rows[i].entropy.error);
    for (const auto& r : g.rows) CHECK(r.dim_estimate <= 1.0);
}

TEST_CASE("entropy brute force: Shannon entropy of the level partition") {
    const auto a = number("x^3-x-1");
    const auto theta = oracle::real_root(a.minpoly(), 1.3247179572447460);
    const auto e = garsia_entropy(a, 8);
    for (const auto& r : e.rows) {
        const auto ref = oracle::brute_level(theta, r.n, {0, 1});
        double h = 0;
        const double total = std::ldexp(1.0, r.n);
        for (auto m : ref.mult) h -= (m / total) * std::log(m / total);
        CHECK(r.entropy.value == doctest::Approx(h / (r.n * std::log(theta.d()))).epsilon(1e-12));
    }
}

TEST_CASE("gap reduction for an even polynomial") {
    const auto rep = gap_reduction_check(number("x^2-3"), 5);
    CHECK(rep.root.minpoly() == parse_polynomial("x^4-3"));
    CHECK(rep.theta_gaps.rows.size() == 5);
}

TEST_CASE("level cache round trip and corruption") {
    const auto dir = std::filesystem::temp_directory_path() / "bclab_test_cache";
    std::filesystem::remove_all(dir);
    LevelCache cache(dir);
    const auto a = number("x^3-x-1");
    EnumerationOptions opts;
    opts.cache = &cache;
    const auto cold = enumerate_level(a, 9, DigitAlphabet::Signed, opts);
    const auto path = cache.path_for(a.minpoly(), 9, DigitAlphabet::Signed, 1);
    REQUIRE(std::filesystem::exists(path));
    const auto warm = enumerate_level(a, 9, DigitAlphabet::Signed, opts);
    const auto plain = enumerate_level(a, 9, DigitAlphabet::Signed);
    REQUIRE(cold.size() == warm.size());
    REQUIRE(plain.size() == warm.size());
    for (std::size_t i = 0; i < warm.size(); ++i) {
        CHECK(warm.multiplicity(i) == plain.multiplicity(i));
        CHECK(warm.residue(i) == plain.residue(i));
        CHECK(warm.witness(i) == plain.witness(i));
        CHECK(compare(warm.value(i), plain.value(i)) == 0);
    }
    const auto loaded = cache.load(a.minpoly(), 9, DigitAlphabet::Signed, 1);
    REQUIRE(loaded);
    CHECK(loaded->size() == plain.size());
    CHECK_FALSE(cache.load(a.minpoly(), 9, DigitAlphabet::Binary, 1));
    CHECK_FALSE(cache.load(parse_polynomial("x^2-x-1"), 9, DigitAlphabet::Signed, 1));

    std::filesystem::resize_file(path, std::filesystem::file_size(path) - 5);
    CHECK_FALSE(cache.load(a.minpoly(), 9, DigitAlphabet::Signed, 1));
    const auto rebuilt = enumerate_level(a, 9, DigitAlphabet::Signed, opts);
    CHECK(rebuilt.size() == plain.size());
    CHECK(cache.load(a.minpoly(), 9, DigitAlphabet::Signed, 1));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache in an unwritable location raises CacheIO") {
    LevelCache cache("/proc/bclab-no-such-dir");
    EnumerationOptions opts;
    opts.cache = &cache;
    try {
        enumerate_level(number("x^2-x-1"), 4, DigitAlphabet::Binary, opts);
        FAIL("expected CacheIO");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CacheIO);
    }
}
