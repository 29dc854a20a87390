#include "bclab/algebraic.hpp"

#include "bclab/errors.hpp"
#include "detail/fixed_complex.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>

namespace bclab {

namespace {

// q with p(x) = x^m q(x + 1/x) for palindromic p of degree 2m.
ZPoly trace_polynomial(const ZPoly& p) {
    const std::size_t m = (p.size() - 1) / 2;
    // V_0 = 2, V_1 = t, V_{k+1} = t V_k - V_{k-1}; x^k + x^-k = V_k(x + 1/x).
    std::vector<ZPoly> v{ZPoly{2}, ZPoly{0, 1}};
    for (std::size_t k = 2; k <= m; ++k) v.push_back(zpoly::sub(zpoly::mul(ZPoly{0, 1}, v[k - 1]), v[k - 2]));
    ZPoly q{p[m]};
    for (std::size_t k = 1; k <= m; ++k) {
        ZPoly term = v[k];
        for (auto& c : term) c *= p[m + k];
        q = zpoly::add(q, term);
    }
    return q;
}

// Number of roots of p on the unit circle. Exact: for palindromic p the
// unit-circle roots correspond to real roots of the trace polynomial in (-2, 2).
int unit_circle_root_count(const IntPolynomial& p, int bits, int max_bits) {
    if (p.degree() == 1) {
        const bool at_one = zpoly::evaluate(p.ascending(), 1) == 0 || zpoly::evaluate(p.ascending(), -1) == 0;
        return at_one ? 1 : 0;
    }
    if (!p.is_reciprocal() || p.degree() % 2 != 0) return 0;
    const ZPoly q = trace_polynomial(p.ascending());
    const mpq_class two(2);
    for (int b = bits; b <= max_bits; b *= 2) {
        auto roots = isolate_roots(q, b, RootOptions{std::max(max_bits, b)});
        int inside = 0;
        bool decided = true;
        for (const auto& r : roots) {
            if (!r.is_real) continue;
            const mpq_class c = r.re_q(), rad = r.radius_q();
            if (c + rad < two && c - rad > -two) ++inside;
            else if (!(c - rad > two || c + rad < -two)) decided = false;
        }
        if (decided) return 2 * inside;
    }
    fail(ErrorCode::PrecisionExhausted, "cannot place trace-polynomial roots relative to [-2, 2]");
}

std::size_t match_index(const RootEnclosure& old, const std::vector<RootEnclosure>& fresh) {
    const auto c = old.center();
    std::size_t best = 0;
    double best_dist = INFINITY;
    for (std::size_t i = 0; i < fresh.size(); ++i) {
        double dist = std::abs(fresh[i].center() - c);
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

// Unit-circle classes for every conjugate; conj is refined in place as needed.
std::vector<ModulusClass> unit_circle_classes(const IntPolynomial& p, std::vector<RootEnclosure>& conj,
                                              std::size_t& tracked, const AlgebraicOptions& opts) {
    const int on_circle = unit_circle_root_count(p, opts.bits, opts.max_bits);
    const mpq_class one(1);
    int bits = opts.bits;
    for (;;) {
        std::vector<ModulusClass> classes(conj.size(), ModulusClass::OnCircle);
        int undecided = 0;
        for (std::size_t i = 0; i < conj.size(); ++i) {
            Side side = conj[i].modulus_vs(one);
            if (side == Side::Below) classes[i] = ModulusClass::Inside;
            else if (side == Side::Above) classes[i] = ModulusClass::Outside;
            else ++undecided;
        }
        if (undecided == on_circle) return classes;
        bits *= 2;
        if (bits > opts.max_bits)
            fail(ErrorCode::PrecisionExhausted, "cannot separate conjugate moduli of " + p.to_string() + " from 1");
        auto fresh = isolate_roots(p.ascending(), bits, RootOptions{opts.max_bits * 4});
        tracked = match_index(conj[tracked], fresh);
        conj = std::move(fresh);
    }
}

BoundedReal product_of_moduli(const std::vector<RootEnclosure>& conj, const std::vector<ModulusClass>& classes) {
    long double value = 1;
    long double rel = 0;
    int factors = 0;
    for (std::size_t i = 0; i < conj.size(); ++i) {
        if (classes[i] != ModulusClass::Outside) continue;
        const long double re = detail::scaled_to_double(conj[i].re, conj[i].scale);
        const long double im = detail::scaled_to_double(conj[i].im, conj[i].scale);
        const long double m = std::hypot(re, im);
        const long double r = conj[i].radius_upper();
        value *= m;
        rel += r / std::max<long double>(m - r, 1e-300L) + 4 * std::ldexp(1.0L, -52);
        ++factors;
    }
    BoundedReal out;
    out.value = static_cast<double>(value);
    out.error = static_cast<double>(value * rel * (1 + rel)) + std::abs(out.value) * std::ldexp(1.0, -52);
    if (factors == 0) out.error = 0;
    return out;
}

}  // namespace

RealBracket AlgebraicNumber::theta_bracket(int bits) const {
    return refine_real_root(minpoly_.ascending(), bracket_of(theta()), bits);
}

AlgebraicNumber AlgebraicNumber::with_root(const IntPolynomial& p, std::vector<RootEnclosure> conj, std::size_t index,
                                           const AlgebraicOptions& opts) {
    if (index >= conj.size() || !conj[index].is_real)
        fail(ErrorCode::InvalidArgument, "selected conjugate is not a real root");
    if (conj[index].re_q() - conj[index].radius_q() <= 1)
        fail(ErrorCode::InvalidArgument, "selected root is not certified above 1");
    AlgebraicNumber a;
    a.minpoly_ = p;
    a.opts_ = opts;
    a.classes_ = unit_circle_classes(p, conj, index, opts);
    a.conjugates_ = std::move(conj);
    a.theta_index_ = index;
    a.s_ = static_cast<int>(std::count_if(a.conjugates_.begin(), a.conjugates_.end(),
                                          [](const RootEnclosure& e) { return !e.is_real; }));
    a.mahler_ = product_of_moduli(a.conjugates_, a.classes_);
    // theta < 2 decided on a refined bracket; theta == 2 only for x - 2.
    if (zpoly::evaluate(p.ascending(), 2) == 0 && p.degree() == 1) {
        a.outside_1_2_ = true;
    } else {
        RealBracket b = a.theta_bracket(32);
        for (int bits = 64; b.lo_q() < 2 && b.hi_q() > 2; bits *= 2) b = a.theta_bracket(bits);
        a.outside_1_2_ = b.lo_q() > 2;
    }
    return a;
}

std::vector<RootEnclosure> conjugates(const IntPolynomial& p, int bits) { return isolate_roots(p.ascending(), bits); }

AlgebraicNumber select_theta(const IntPolynomial& p, std::vector<RootEnclosure> conj, const AlgebraicOptions& opts) {
    int bits = conj.empty() ? opts.bits : conj.front().scale;
    for (;;) {
        bool straddles = false;
        for (std::size_t i = 0; i < conj.size(); ++i) {
            if (!conj[i].is_real) continue;
            const mpq_class c = conj[i].re_q(), r = conj[i].radius_q();
            if (c - r > 1) return AlgebraicNumber::with_root(p, std::move(conj), i, opts);
            if (c + r >= 1) straddles = true;
        }
        // The exact root 1 belongs to x - 1 only.
        if (!straddles || zpoly::evaluate(p.ascending(), 1) == 0)
            fail(ErrorCode::NoRealRootAboveOne, p.to_string() + " has no real root above 1");
        bits *= 2;
        if (bits > opts.max_bits) fail(ErrorCode::PrecisionExhausted, "cannot separate a real root from 1");
        conj = isolate_roots(p.ascending(), bits);
    }
}

AlgebraicNumber make_algebraic(const IntPolynomial& p, const AlgebraicOptions& opts) {
    require_irreducible(p, opts.degree_cap);
    return select_theta(p, conjugates(p, opts.bits), opts);
}

BoundedReal mahler_measure(const AlgebraicNumber& a) { return a.mahler(); }

ClassificationReport classify(const AlgebraicNumber& a) {
    const IntPolynomial& p = a.minpoly();
    const auto& classes = a.modulus_classes();
    ClassificationReport r;
    r.is_algebraic_integer = p.is_monic();
    r.is_unit = r.is_algebraic_integer && abs(p.constant_term()) == 1;
    r.height = p.height();
    r.has_minus_theta_conjugate = p.has_only_even_powers();
    r.in_range_1_2 = !a.outside_unit_interval();
    r.mahler = a.mahler();

    const std::size_t t = a.theta_index();
    int outside = 0;
    bool others_inside = true;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (classes[i] == ModulusClass::Outside) ++outside;
        if (i != t && classes[i] != ModulusClass::Inside) others_inside = false;
    }
    r.is_pisot = r.is_algebraic_integer && others_inside;
    r.is_salem = r.is_algebraic_integer && p.is_reciprocal() && p.degree() >= 4 && outside == 1;
    r.is_garsia = r.is_algebraic_integer && abs(p.constant_term()) == 2 &&
                  outside == static_cast<int>(classes.size());

    if (r.has_minus_theta_conjugate) {
        r.is_perron = false;  // -theta is a conjugate of equal modulus
    } else {
        std::vector<RootEnclosure> conj = a.conjugates();
        std::size_t ti = t;
        int bits = conj[ti].scale;
        for (;;) {
            const mpq_class lo = conj[ti].re_q() - conj[ti].radius_q();
            const mpq_class hi = conj[ti].re_q() + conj[ti].radius_q();
            bool all_below = true, some_above = false;
            for (std::size_t i = 0; i < conj.size(); ++i) {
                if (i == ti) continue;
                if (conj[i].modulus_vs(lo) == Side::Below) continue;
                all_below = false;
                if (conj[i].modulus_vs(hi) == Side::Above) some_above = true;
            }
            if (all_below || some_above) {
                r.is_perron = all_below;
                break;
            }
            bits *= 2;
            if (bits > a.options().max_bits)
                fail(ErrorCode::PrecisionExhausted, "conjugate modulus cannot be separated from theta");
            auto fresh = isolate_roots(p.ascending(), bits, RootOptions{a.options().max_bits * 4});
            ti = match_index(conj[ti], fresh);
            conj = std::move(fresh);
        }
    }
    return r;
}

ZPoly minimal_factor(const ZPoly& p, const std::vector<RootEnclosure>& roots, std::size_t target) {
    const int d = zpoly::degree(p);
    const mpz_class& lead = p[static_cast<std::size_t>(d)];
    const long double lc = lead.get_d();

    // Group roots into conjugation-closed units.
    std::vector<std::vector<std::size_t>> units;
    std::vector<bool> used(roots.size(), false);
    std::size_t target_unit = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        std::vector<std::size_t> unit{i};
        used[i] = true;
        if (!roots[i].is_real) {
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (!used[j] && roots[j].re == roots[i].re && roots[j].im == -roots[i].im &&
                    roots[j].scale == roots[i].scale) {
                    unit.push_back(j);
                    used[j] = true;
                    break;
                }
            }
        }
        if (std::find(unit.begin(), unit.end(), target) != unit.end()) target_unit = units.size();
        units.push_back(std::move(unit));
    }

    constexpr int kSums = 3;
    struct UnitSums {
        long double s[kSums];
        int degree;
    };
    std::vector<UnitSums> sums;
    long double magnitude[kSums] = {0, 0, 0};
    for (const auto& unit : units) {
        UnitSums u{{0, 0, 0}, static_cast<int>(unit.size())};
        for (std::size_t idx : unit) {
            const auto c = roots[idx].center();
            std::complex<long double> z(lc * c.real(), lc * c.imag()), w = 1;
            for (int k = 0; k < kSums; ++k) {
                w *= z;
                u.s[k] += w.real();
                magnitude[k] += std::abs(w);
            }
        }
        sums.push_back(u);
    }

    std::vector<std::size_t> others;
    for (std::size_t u = 0; u < units.size(); ++u)
        if (u != target_unit) others.push_back(u);
    if (others.size() > 26) fail(ErrorCode::DegreeCapExceeded, "too many root units for subset reconstruction");

    auto near_integer = [&](const long double* s) {
        for (int k = 0; k < kSums; ++k) {
            const long double tol = 1e-8L * (1 + magnitude[k]);
            if (std::fabs(s[k] - std::nearbyint(s[k])) > tol) return false;
        }
        return true;
    };

    struct Candidate {
        int degree;
        std::uint64_t mask;
    };
    std::vector<Candidate> candidates;
    long double acc[kSums];
    std::copy(std::begin(sums[target_unit].s), std::end(sums[target_unit].s), acc);
    int deg = sums[target_unit].degree;
    std::uint64_t mask = 0;
    const std::uint64_t total = std::uint64_t{1} << others.size();
    for (std::uint64_t step = 0;; ++step) {
        if (near_integer(acc)) candidates.push_back({deg, mask});
        if (step + 1 == total) break;
        // Gray code: flip the lowest set bit of step + 1.
        const int bit = std::countr_zero(step + 1);
        const UnitSums& u = sums[others[static_cast<std::size_t>(bit)]];
        const std::uint64_t flag = std::uint64_t{1} << bit;
        const long double sign = (mask & flag) ? -1 : 1;
        for (int k = 0; k < kSums; ++k) acc[k] += sign * u.s[k];
        deg += (mask & flag) ? -u.degree : u.degree;
        mask ^= flag;
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.degree != b.degree ? a.degree < b.degree : a.mask < b.mask;
    });

    for (const auto& cand : candidates) {
        std::vector<std::size_t> members = units[target_unit];
        for (std::size_t b = 0; b < others.size(); ++b)
            if (cand.mask >> b & 1) members.insert(members.end(), units[others[b]].begin(), units[others[b]].end());
        if (static_cast<int>(members.size()) == d) return zpoly::primitive(p);
        // lead * prod (x - z) at the common fixed-point scale.
        int scale = 0;
        for (std::size_t idx : members) scale = std::max(scale, roots[idx].scale);
        detail::FixedComplex fx(scale);
        std::vector<detail::Fx> poly{{lead << static_cast<unsigned>(scale), 0}};
        for (std::size_t idx : members) {
            const auto& r = roots[idx];
            detail::Fx z{r.re << static_cast<unsigned>(scale - r.scale), r.im << static_cast<unsigned>(scale - r.scale)};
            std::vector<detail::Fx> next(poly.size() + 1, detail::Fx{0, 0});
            for (std::size_t k = 0; k < poly.size(); ++k) {
                next[k + 1].re += poly[k].re;
                next[k + 1].im += poly[k].im;
                detail::Fx t = fx.mul(poly[k], z);
                next[k].re -= t.re;
                next[k].im -= t.im;
            }
            poly = std::move(next);
        }
        ZPoly g(poly.size());
        const mpz_class half = mpz_class(1) << static_cast<unsigned>(scale - 1);
        for (std::size_t k = 0; k < poly.size(); ++k) {
            mpz_class v = poly[k].re + half;
            mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(scale));
            g[k] = v;
        }
        g = zpoly::primitive(g);
        if (zpoly::degree(g) == static_cast<int>(members.size()) && zpoly::divides(g, p)) return g;
    }
    return zpoly::primitive(p);
}

IrreducibilityVerdict irreducibility_check(const IntPolynomial& p, int degree_cap) {
    IrreducibilityVerdict v;
    if (p.degree() > degree_cap) return v;
    auto reducible = [&](const ZPoly& f) {
        v.kind = IrreducibilityVerdict::Kind::Reducible;
        v.factor = IntPolynomial::from_ascending(f);
        return v;
    };
    if (p.degree() == 1) {
        v.kind = IrreducibilityVerdict::Kind::Irreducible;
        return v;
    }
    if (p.constant_term() == 0) return reducible(ZPoly{0, 1});
    const ZPoly& a = p.ascending();
    ZPoly g = zpoly::gcd(a, zpoly::derivative(a));
    if (zpoly::degree(g) >= 1) return reducible(g);
    const int bits = 128 + 8 * p.degree() + 2 * static_cast<int>(mpz_sizeinbase(p.height().get_mpz_t(), 2));
    auto roots = isolate_roots(a, bits);
    ZPoly f = minimal_factor(a, roots, 0);
    if (zpoly::degree(f) < p.degree()) return reducible(f);
    v.kind = IrreducibilityVerdict::Kind::Irreducible;
    return v;
}

void require_irreducible(const IntPolynomial& p, int degree_cap) {
    auto v = irreducibility_check(p, degree_cap);
    if (v.kind == IrreducibilityVerdict::Kind::Inconclusive)
        fail(ErrorCode::DegreeCapExceeded,
             "degree " + std::to_string(p.degree()) + " exceeds cap " + std::to_string(degree_cap));
    if (v.kind == IrreducibilityVerdict::Kind::Reducible)
        fail(ErrorCode::Reducible, p.to_string() + " has factor " + v.factor->to_string());
}

AlgebraicNumber square_root(const AlgebraicNumber& a) {
    const AlgebraicOptions& opts = a.options();
    const ZPoly lifted = zpoly::substitute_square(a.minpoly().ascending());
    if (zpoly::degree(lifted) > opts.degree_cap)
        fail(ErrorCode::DegreeCapExceeded, "p(x^2) has degree " + std::to_string(zpoly::degree(lifted)));
    const int bits = std::max(opts.bits, 128 + 8 * zpoly::degree(lifted));
    auto roots = isolate_roots(lifted, bits);
    const double target_value = std::sqrt(a.theta_approx());
    std::size_t target = roots.size();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (!roots[i].is_real || roots[i].center().real() <= 0) continue;
        if (target == roots.size() ||
            std::abs(roots[i].center().real() - target_value) < std::abs(roots[target].center().real() - target_value))
            target = i;
    }
    if (target == roots.size()) fail(ErrorCode::InvalidArgument, "no positive real square root found");
    const IntPolynomial g = IntPolynomial::from_ascending(minimal_factor(lifted, roots, target));
    auto conj = isolate_roots(g.ascending(), opts.bits);
    return AlgebraicNumber::with_root(g, conj, match_index(roots[target], conj), opts);
}

SqrtTower sqrt_tower_reduce(const AlgebraicNumber& a, int max_steps) {
    if (max_steps < 1) fail(ErrorCode::InvalidArgument, "max_steps must be >= 1");
    SqrtTower t{a, 0};
    while (t.alpha.minpoly().has_only_even_powers()) {
        if (t.steps == max_steps)
            fail(ErrorCode::ReductionDidNotTerminate, "minimal polynomial still even after " +
                                                          std::to_string(max_steps) + " square roots: " +
                                                          t.alpha.minpoly().to_string());
        t.alpha = square_root(t.alpha);
        ++t.steps;
    }
    return t;
}

}  // namespace bclab
