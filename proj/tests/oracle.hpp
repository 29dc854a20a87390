#pragma once

// Independent high-precision oracles built directly on MPFR. Nothing here
// calls into the library except to read polynomial coefficients.

#include "bclab/polynomial.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

class Mp {
public:
    explicit Mp(mpfr_prec_t bits = 512) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    Mp(double x, mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
    Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mp& operator=(const Mp& o) {
        if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    ~Mp() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double d() const { return mpfr_get_d(v_, MPFR_RNDN); }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

private:
    mpfr_t v_;
};

inline Mp eval(const bclab::ZPoly& p, const Mp& x) {
    Mp acc(x.prec());
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        mpfr_mul(acc.get(), acc.get(), x.get(), MPFR_RNDN);
        mpfr_add_z(acc.get(), acc.get(), it->get_mpz_t(), MPFR_RNDN);
    }
    return acc;
}

// Newton polish of a real root from a double guess.
inline Mp real_root(const bclab::IntPolynomial& p, double guess, mpfr_prec_t bits = 512) {
    const bclab::ZPoly& c = p.ascending();
    bclab::ZPoly dc;
    for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(c[k] * static_cast<unsigned long>(k));
    Mp x(guess, bits);
    for (int it = 0; it < 200; ++it) {
        Mp f = eval(c, x), df = eval(dc, x), step(bits);
        mpfr_div(step.get(), f.get(), df.get(), MPFR_RNDN);
        mpfr_sub(x.get(), x.get(), step.get(), MPFR_RNDN);
        if (mpfr_zero_p(step.get()) || mpfr_get_exp(step.get()) < -static_cast<mpfr_exp_t>(bits) + 8) break;
    }
    return x;
}

// Sorted distinct level-n sums sum_{k=1..n} a_k theta^(k + shift) with their
// multiplicities; two sums are identified when they agree to 2^-tol_bits.
struct Level {
    std::vector<double> values;
    std::vector<std::uint64_t> mult;
};

inline Level brute_level(const Mp& theta, int n, const std::vector<int>& alphabet, long first_exponent = 1,
                         int tol_bits = 300) {
    const mpfr_prec_t bits = theta.prec();
    std::vector<Mp> powers;
    for (int k = 0; k < n; ++k) {
        Mp p(bits);
        mpfr_set_si(p.get(), first_exponent + k, MPFR_RNDN);
        mpfr_pow(p.get(), theta.get(), p.get(), MPFR_RNDN);
        powers.push_back(p);
    }
    std::uint64_t total = 1;
    for (int k = 0; k < n; ++k) total *= alphabet.size();
    std::vector<Mp> sums;
    sums.reserve(total);
    std::vector<int> idx(n, 0);
    for (std::uint64_t s = 0; s < total; ++s) {
        Mp acc(bits);
        for (int k = 0; k < n; ++k) {
            Mp term(bits);
            mpfr_mul_si(term.get(), powers[k].get(), alphabet[idx[k]], MPFR_RNDN);
            mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        }
        sums.push_back(acc);
        for (int k = 0; k < n; ++k) {
            if (++idx[k] < static_cast<int>(alphabet.size())) break;
            idx[k] = 0;
        }
    }
    std::sort(sums.begin(), sums.end(), [](const Mp& a, const Mp& b) { return mpfr_less_p(a.get(), b.get()); });
    Level out;
    Mp diff(bits);
    for (std::size_t i = 0; i < sums.size(); ++i) {
        if (i > 0) {
            mpfr_sub(diff.get(), sums[i].get(), sums[i - 1].get(), MPFR_RNDN);
            if (mpfr_zero_p(diff.get()) || mpfr_get_exp(diff.get()) < -tol_bits) {
                ++out.mult.back();
                continue;
            }
        }
        out.values.push_back(sums[i].d());
        out.mult.push_back(1);
    }
    return out;
}

// beta_n(x) by trying every prefix: the residual theta^n (x - sum a_k theta^-k)
// must lie in [0, 1/(theta - 1)].
inline std::vector<std::uint64_t> brute_beta(const Mp& theta, const std::vector<int>& x_digits, int n_max,
                                             int tol_bits = 300) {
    const mpfr_prec_t bits = theta.prec();
    Mp inv(bits), x(bits), t(bits), p(bits);
    mpfr_ui_div(inv.get(), 1, theta.get(), MPFR_RNDN);
    mpfr_set_ui(p.get(), 1, MPFR_RNDN);
    for (int d : x_digits) {
        mpfr_mul(p.get(), p.get(), inv.get(), MPFR_RNDN);
        if (d) mpfr_add(x.get(), x.get(), p.get(), MPFR_RNDN);
    }
    mpfr_sub_ui(t.get(), theta.get(), 1, MPFR_RNDN);
    mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDN);
    Mp tol(bits);
    mpfr_set_ui_2exp(tol.get(), 1, -tol_bits, MPFR_RNDN);
    std::vector<std::uint64_t> out;
    for (int n = 1; n <= n_max; ++n) {
        Mp scale(bits);
        mpfr_pow_ui(scale.get(), theta.get(), static_cast<unsigned long>(n), MPFR_RNDN);
        std::uint64_t count = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            Mp r(x), q(bits);
            mpfr_set_ui(q.get(), 1, MPFR_RNDN);
            for (int k = 0; k < n; ++k) {
                mpfr_mul(q.get(), q.get(), inv.get(), MPFR_RNDN);
                if (mask >> k & 1) mpfr_sub(r.get(), r.get(), q.get(), MPFR_RNDN);
            }
            mpfr_mul(r.get(), r.get(), scale.get(), MPFR_RNDN);
            Mp hi(bits);
            mpfr_add(hi.get(), t.get(), tol.get(), MPFR_RNDN);
            mpfr_neg(q.get(), tol.get(), MPFR_RNDN);
            if (mpfr_greaterequal_p(r.get(), q.get()) && mpfr_lessequal_p(r.get(), hi.get())) ++count;
        }
        out.push_back(count);
    }
    return out;
}

// Number of depth-m cylinders [S, S + theta^-m T] inside and meeting [lo, hi],
// with S running over all 2^m prefix sums.
inline std::pair<std::uint64_t, std::uint64_t> brute_cylinders(const Mp& theta, int m, double lo, double hi) {
    const mpfr_prec_t bits = theta.prec();
    Mp inv(bits), t(bits), w(bits);
    mpfr_ui_div(inv.get(), 1, theta.get(), MPFR_RNDN);
    mpfr_sub_ui(t.get(), theta.get(), 1, MPFR_RNDN);
    mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDN);
    mpfr_pow_ui(w.get(), inv.get(), static_cast<unsigned long>(m), MPFR_RNDN);
    mpfr_mul(w.get(), w.get(), t.get(), MPFR_RNDN);
    const double width = w.d();
    std::uint64_t inside = 0, meeting = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        Mp s(bits), q(bits);
        mpfr_set_ui(q.get(), 1, MPFR_RNDN);
        for (int k = 0; k < m; ++k) {
            mpfr_mul(q.get(), q.get(), inv.get(), MPFR_RNDN);
            if (mask >> k & 1) mpfr_add(s.get(), s.get(), q.get(), MPFR_RNDN);
        }
        const double a = s.d(), b = a + width;
        if (a > lo && b < hi) ++inside;
        if (b >= lo && a <= hi) ++meeting;
    }
    return {inside, meeting};
}

}  // namespace oracle
