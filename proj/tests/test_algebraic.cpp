#include "bclab/algebraic.hpp"
#include "bclab/errors.hpp"

#include "numbers.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace bclab;

TEST_CASE("parse: list and expression forms agree") {
    CHECK(parse_polynomial("x^2-x-1") == parse_polynomial("1,-1,-1"));
    CHECK(parse_polynomial("(x-1)*(x+2)") == parse_polynomial("x^2 + x - 2"));
    CHECK(parse_polynomial("2x-3").to_csv() == "2,-3");
    CHECK(parse_polynomial("-x^2+x+1") == parse_polynomial("x^2-x-1"));
    CHECK(parse_polynomial("4x^2-4x-4") == parse_polynomial("x^2-x-1"));
}

TEST_CASE("parse: errors") {
    auto code = [](const char* text) {
        try {
            parse_polynomial(text);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::InvalidArgument;
    };
    CHECK(code("x^^2") == ErrorCode::Syntax);
    CHECK(code("x^2+") == ErrorCode::Syntax);
    CHECK(code("0") == ErrorCode::ZeroPolynomial);
    CHECK(code("x-x") == ErrorCode::ZeroPolynomial);
    CHECK(code("7") == ErrorCode::DegreeZero);
}

TEST_CASE("polynomial predicates") {
    CHECK(parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1").is_reciprocal());
    CHECK_FALSE(parse_polynomial("x^3-x-1").is_reciprocal());
    CHECK(parse_polynomial("x^4-x^2-1").has_only_even_powers());
    CHECK_FALSE(parse_polynomial("x^2-x-1").has_only_even_powers());
    CHECK(parse_polynomial("x^3-4x+2").height() == 4);
}

TEST_CASE("golden conjugates match the quadratic formula at 512 bits") {
    const auto a = make_algebraic(parse_polynomial("x^2-x-1"), {256, 2048, 24});
    oracle::Mp s5(512), root(512);
    mpfr_set_ui(s5.get(), 5, MPFR_RNDN);
    mpfr_sqrt(s5.get(), s5.get(), MPFR_RNDN);
    mpfr_add_ui(root.get(), s5.get(), 1, MPFR_RNDN);
    mpfr_div_ui(root.get(), root.get(), 2, MPFR_RNDN);
    const auto& t = a.theta();
    REQUIRE(t.is_real);
    // |center - root| <= radius, checked in MPFR
    oracle::Mp center(512), diff(512), radius(512);
    mpfr_set_z(center.get(), t.re.get_mpz_t(), MPFR_RNDN);
    mpfr_div_2si(center.get(), center.get(), t.scale, MPFR_RNDN);
    mpfr_set_z(radius.get(), t.radius.get_mpz_t(), MPFR_RNDN);
    mpfr_div_2si(radius.get(), radius.get(), t.scale, MPFR_RNDN);
    mpfr_sub(diff.get(), center.get(), root.get(), MPFR_RNDN);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
    CHECK(mpfr_lessequal_p(diff.get(), radius.get()));
    CHECK(t.radius_upper() < std::ldexp(1.0, -250));
}

TEST_CASE("Vieta: sum of enclosure centers equals -c_{d-1}/c_d") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto p = parse_polynomial(num.poly);
        const auto roots = conjugates(p, 128);
        REQUIRE(static_cast<int>(roots.size()) == p.degree());
        std::complex<double> sum = 0;
        double slack = 0;
        for (const auto& r : roots) {
            sum += r.center();
            slack += r.radius_upper();
        }
        const double expected = -p.coeff(p.degree() - 1).get_d() / p.leading().get_d();
        CHECK(std::abs(sum - expected) <= slack + 1e-12);
        CHECK(std::abs(sum.imag()) <= slack + 1e-12);
    }
}

TEST_CASE("theta matches an independent Newton polish") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto p = parse_polynomial(num.poly);
        const auto a = make_algebraic(p);
        const auto root = oracle::real_root(p, num.theta);
        CHECK(a.theta().center().real() == doctest::Approx(root.d()).epsilon(1e-15));
    }
}

TEST_CASE("classification of the reference numbers") {
    auto report = [](const char* poly) { return classify(make_algebraic(parse_polynomial(poly))); };

    const auto golden = report("x^2-x-1");
    CHECK(golden.is_pisot);
    CHECK_FALSE(golden.is_salem);
    CHECK(golden.is_perron);
    CHECK(golden.is_unit);
    CHECK(golden.height == 1);
    CHECK_FALSE(golden.is_garsia);

    CHECK(report("x^3-x-1").is_pisot);

    const auto lehmer = report("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    CHECK(lehmer.is_salem);
    CHECK_FALSE(lehmer.is_pisot);
    CHECK(lehmer.is_perron);
    CHECK(lehmer.is_unit);
    CHECK(lehmer.mahler.contains(1.1762808182599175));

    const auto garsia = report("x^3-x-2");
    CHECK(garsia.is_garsia);
    CHECK_FALSE(garsia.is_pisot);
    CHECK(garsia.mahler.contains(2.0));

    const auto sqrt2 = report("x^2-2");
    CHECK_FALSE(sqrt2.is_perron);
    CHECK(sqrt2.has_minus_theta_conjugate);

    const auto three_halves = report("2x-3");
    CHECK_FALSE(three_halves.is_algebraic_integer);
    CHECK(three_halves.mahler.contains(1.5));
}

TEST_CASE("pisot and salem are exclusive; flags stable under more precision") {
    for (const auto& num : fixtures::kNumbers) {
        CAPTURE(num.name);
        const auto p = parse_polynomial(num.poly);
        const auto lo = classify(make_algebraic(p, {128, 2048, 24}));
        const auto hi = classify(make_algebraic(p, {256, 4096, 24}));
        CHECK_FALSE((lo.is_pisot && lo.is_salem));
        CHECK(lo.is_pisot == hi.is_pisot);
        CHECK(lo.is_salem == hi.is_salem);
        CHECK(lo.is_perron == hi.is_perron);
        CHECK(lo.is_garsia == hi.is_garsia);
        CHECK(lo.mahler.value + lo.mahler.error >= make_algebraic(p).theta_approx() - 1e-12);
    }
}

TEST_CASE("irreducibility") {
    auto verdict = irreducibility_check(parse_polynomial("x^2-1"));
    REQUIRE(verdict.kind == IrreducibilityVerdict::Kind::Reducible);
    REQUIRE(verdict.factor);
    CHECK(zpoly::divides(verdict.factor->ascending(), parse_polynomial("x^2-1").ascending()));

    verdict = irreducibility_check(parse_polynomial("x^4+4"));
    REQUIRE(verdict.kind == IrreducibilityVerdict::Kind::Reducible);
    CHECK(verdict.factor->degree() == 2);

    CHECK(irreducibility_check(parse_polynomial("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")).kind ==
          IrreducibilityVerdict::Kind::Irreducible);
    CHECK_THROWS_AS(require_irreducible(parse_polynomial("x^3-1")), Error);
}

TEST_CASE("theta selection errors") {
    CHECK_THROWS_AS(make_algebraic(parse_polynomial("x^2+1")), Error);
    try {
        make_algebraic(parse_polynomial("2x-1"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoRealRootAboveOne);
    }
}

TEST_CASE("square-root tower") {
    const auto golden = make_algebraic(parse_polynomial("x^2-x-1"));
    const auto same = sqrt_tower_reduce(golden);
    CHECK(same.steps == 0);
    CHECK(same.alpha.minpoly() == golden.minpoly());

    const auto r = square_root(make_algebraic(parse_polynomial("x^2-3")));
    CHECK(r.minpoly() == parse_polynomial("x^4-3"));
    CHECK(r.theta_approx() == doctest::Approx(std::pow(3.0, 0.25)));

    try {
        sqrt_tower_reduce(make_algebraic(parse_polynomial("x^2-3")), 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ReductionDidNotTerminate);
    }
    try {
        sqrt_tower_reduce(make_algebraic(parse_polynomial("x^2-2")));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegreeCapExceeded);
    }
}

TEST_CASE("square root of theta^2 recovers theta") {
    // (x^2-x-1) at sqrt: theta^2 = theta + 1 has minimal polynomial x^2 - 3x + 1
    const auto sq = make_algebraic(parse_polynomial("x^2-3x+1"));
    const auto r = square_root(sq);
    CHECK(r.minpoly() == parse_polynomial("x^2-x-1"));
}
