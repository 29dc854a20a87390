#include "bclab/errors.hpp"
#include "bclab/spectra.hpp"

#include <doctest.h>

#include <cmath>

using namespace bclab;

namespace {

AlgebraicNumber number(const char* poly) { return make_algebraic(parse_polynomial(poly)); }

// tr(C^n) for the companion matrix C of a monic p, by repeated multiplication.
std::vector<mpz_class> companion_traces(const IntPolynomial& p, int N) {
    const int d = p.degree();
    using Matrix = std::vector<std::vector<mpz_class>>;
    Matrix c(d, std::vector<mpz_class>(d, 0));
    for (int i = 1; i < d; ++i) c[i][i - 1] = 1;
    for (int i = 0; i < d; ++i) c[i][d - 1] = -p.coeff(i);
    Matrix power = c;
    std::vector<mpz_class> out;
    for (int n = 1; n <= N; ++n) {
        mpz_class tr = 0;
        for (int i = 0; i < d; ++i) tr += power[i][i];
        out.push_back(tr);
        Matrix next(d, std::vector<mpz_class>(d, 0));
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                if (power[i][k] != 0)
                    for (int j = 0; j < d; ++j) next[i][j] += power[i][k] * c[k][j];
        power = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("golden traces are the Lucas numbers") {
    const auto t = power_traces(parse_polynomial("x^2-x-1"), 40);
    mpz_class a = 2, b = 1;  // L_0, L_1
    for (int n = 1; n <= 40; ++n) {
        CHECK(t.t[n - 1] == b);
        mpz_class c = a + b;
        a = b;
        b = c;
    }
    CHECK(t.t[0] == 1);
    CHECK(t.t[5] == 18);
}

TEST_CASE("traces agree with companion matrix powers") {
    for (const char* poly : {"x^3-x-1", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "x^3-x-2", "x^2-2", "x^4-x^3-x^2-x+1"}) {
        CAPTURE(poly);
        const auto p = parse_polynomial(poly);
        CHECK(power_traces(p, 60).t == companion_traces(p, 60));
    }
}

TEST_CASE("trace errors") {
    try {
        power_traces(parse_polynomial("2x-3"), 5);
        FAIL("expected NotMonic");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotMonic);
    }
    CHECK_THROWS_AS(power_traces(parse_polynomial("x^2-x-1"), 1001), Error);
    CHECK_NOTHROW(power_traces(parse_polynomial("x^2-x-1"), 1200, 2000));
}

TEST_CASE("golden residual is (-1/theta)^n") {
    const auto rep = trace_residual_report(number("x^2-x-1"), 60);
    const double phi = (1 + std::sqrt(5.0)) / 2;
    for (const auto& r : rep.rows) {
        const double expected = std::pow(-1 / phi, r.n);
        CHECK(std::fabs(r.residual.value - expected) <= 1e-15 + r.residual.error);
    }
    CHECK(rep.s == 0);
    CHECK(rep.max_abs_residual == doctest::Approx(1 / phi));
}

TEST_CASE("pisot residuals vanish; salem residuals stay bounded") {
    const auto plastic = trace_residual_report(number("x^3-x-1"), 200);
    CHECK(std::fabs(plastic.rows.back().residual.value) < 1e-10);
    const auto lehmer = trace_residual_report(number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"), 300);
    CHECK(lehmer.s == 8);
    CHECK(lehmer.max_abs_residual <= 9.0);
    for (const auto& r : lehmer.rows) CHECK(r.residual.error < 1e-6);
}

TEST_CASE("dominant part of a Salem number is theta^n") {
    const auto a = number("x^4-x^3-x^2-x+1");
    const auto d = dominant_part(a, 30);
    for (int n = 1; n <= 30; ++n)
        CHECK(d.moduli[n - 1].bounded().value == doctest::Approx(std::pow(a.theta_approx(), n)).epsilon(1e-14));
}

TEST_CASE("unit-circle partial sums match the geometric closed form") {
    const auto a = number("x^4-x^3-x^2-x+1");
    const auto series = unit_circle_partial_sums(a, 200);
    REQUIRE(series.size() == 2);
    for (const auto& s : series) {
        const double phi = s.argument;
        for (std::size_t i = 0; i < s.sums.size(); ++i) {
            const double n = static_cast<double>(i + 1);
            // sum_{k=1..n} cos(k phi)
            const double closed = std::sin(n * phi / 2) * std::cos((n + 1) * phi / 2) / std::sin(phi / 2);
            CHECK(s.sums[i].value == doctest::Approx(closed).epsilon(1e-9));
        }
        CHECK(s.sup <= 1 / std::fabs(std::sin(phi / 2)) + 1e-9);
    }
    try {
        unit_circle_partial_sums(number("x^2-x-1"), 10);
        FAIL("expected NotSalem");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSalem);
    }
}

TEST_CASE("pisot tail residuals stay below |r_1|") {
    for (const char* poly : {"x^2-x-1", "x^3-x-1"}) {
        CAPTURE(poly);
        const auto rep = trace_residual_report(number(poly), 200);
        const double r1 = std::fabs(rep.rows[0].residual.value);
        for (std::size_t i = 19; i < rep.rows.size(); ++i) CHECK(std::fabs(rep.rows[i].residual.value) < r1);
    }
}

TEST_CASE("salem partial-sum sup is stable under doubling N") {
    const auto a = number("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    const auto short_run = unit_circle_partial_sums(a, 250);
    const auto long_run = unit_circle_partial_sums(a, 500);
    REQUIRE(short_run.size() == long_run.size());
    for (std::size_t j = 0; j < short_run.size(); ++j) {
        CHECK(long_run[j].sup <= 1 / std::fabs(std::sin(long_run[j].argument / 2)) + 1e-9);
        CHECK(long_run[j].sup <= 1.5 * short_run[j].sup);
    }
}
