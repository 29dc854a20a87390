#include "bclab/roots.hpp"

#include "bclab/errors.hpp"
#include "detail/fixed_complex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bclab {

namespace {

using detail::Fx;
using detail::FixedComplex;
using detail::scaled_to_double;
using detail::long_double_to_fixed;

using cld = std::complex<long double>;

std::vector<cld> aberth_long_double(const ZPoly& p) {
    const int d = zpoly::degree(p);
    std::vector<long double> c(static_cast<std::size_t>(d) + 1);
    for (int k = 0; k <= d; ++k) c[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)].get_d();
    // Fujiwara bound on root moduli.
    long double bound = 0;
    for (int k = 0; k < d; ++k) {
        long double ratio = std::fabs(c[static_cast<std::size_t>(k)] / c[static_cast<std::size_t>(d)]);
        long double root = std::pow(k == 0 ? ratio / 2 : ratio, 1.0L / static_cast<long double>(d - k));
        bound = std::max(bound, 2 * root);
    }
    if (!(bound > 0) || !std::isfinite(bound)) bound = 1;
    std::vector<cld> z(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const long double angle = 2 * std::numbers::pi_v<long double> * i / d + 0.4L;
        z[static_cast<std::size_t>(i)] = std::polar(bound * 0.7L, angle);
    }
    for (int iter = 0; iter < 2000; ++iter) {
        bool done = true;
        for (int i = 0; i < d; ++i) {
            cld& zi = z[static_cast<std::size_t>(i)];
            cld v = c[static_cast<std::size_t>(d)], dv = 0;
            for (int k = d - 1; k >= 0; --k) {
                dv = dv * zi + v;
                v = v * zi + c[static_cast<std::size_t>(k)];
            }
            if (v == cld(0)) continue;
            if (dv == cld(0)) dv = cld(1e-30L);
            cld n = v / dv;
            cld s = 0;
            for (int j = 0; j < d; ++j)
                if (j != i) s += cld(1) / (zi - z[static_cast<std::size_t>(j)]);
            cld den = cld(1) - n * s;
            cld w = den == cld(0) ? n : n / den;
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
            zi -= w;
            if (std::abs(w) > 1e-17L * std::max<long double>(1, std::abs(zi))) done = false;
        }
        if (done) break;
    }
    return z;
}

// Simultaneous Aberth refinement in fixed point; stops when every correction
// is below 2^(16 - bits).
void aberth_fixed(const ZPoly& p, std::vector<Fx>& z, const FixedComplex& fx) {
    const std::size_t d = z.size();
    const Fx one = fx.one();
    const std::size_t small_bits = 16;
    for (int iter = 0; iter < 400; ++iter) {
        std::size_t worst = 0;
        for (std::size_t i = 0; i < d; ++i) {
            Fx v, dv;
            fx.eval(p, z[i], v, dv);
            if (v.re == 0 && v.im == 0) continue;
            if (dv.re == 0 && dv.im == 0) dv.re = 1;
            Fx n = fx.div(v, dv);
            Fx s{0, 0};
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i) continue;
                Fx diff{z[i].re - z[j].re, z[i].im - z[j].im};
                if (diff.re == 0 && diff.im == 0) continue;
                Fx inv = fx.div(one, diff);
                s.re += inv.re;
                s.im += inv.im;
            }
            Fx ns = fx.mul(n, s);
            Fx den{one.re - ns.re, -ns.im};
            Fx w = (den.re == 0 && den.im == 0) ? n : fx.div(n, den);
            z[i].re -= w.re;
            z[i].im -= w.im;
            std::size_t size = std::max(mpz_sizeinbase(w.re.get_mpz_t(), 2), mpz_sizeinbase(w.im.get_mpz_t(), 2));
            if (w.re == 0 && w.im == 0) size = 0;
            worst = std::max(worst, size);
        }
        if (worst <= small_bits) return;
    }
}

// d * |p(z)| / (|a_d| * prod |z - z_j|), scaled by 2^bits and rounded up.
// Returns false when two centers coincide.
bool weierstrass_radius(const ZPoly& p, const std::vector<Fx>& z, std::size_t i, int bits, mpz_class& out) {
    const int d = zpoly::degree(p);
    mpz_class are = p[static_cast<std::size_t>(d)], aim = 0;
    for (int k = d - 1; k >= 0; --k) {
        mpz_class nre = are * z[i].re - aim * z[i].im;
        mpz_class nim = are * z[i].im + aim * z[i].re;
        are = nre + (p[static_cast<std::size_t>(k)] << static_cast<unsigned>(bits * (d - k)));
        aim = nim;
    }
    mpz_class num = are * are + aim * aim;
    num *= static_cast<unsigned long>(d) * static_cast<unsigned long>(d);
    mpz_class den = p[static_cast<std::size_t>(d)] * p[static_cast<std::size_t>(d)];
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) continue;
        mpz_class dre = z[i].re - z[j].re, dim = z[i].im - z[j].im;
        mpz_class m2 = dre * dre + dim * dim;
        if (m2 == 0) return false;
        den *= m2;
    }
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), q.get_mpz_t());
    if (r * r < q) ++r;
    out = r;
    return true;
}

// Marks near-real approximations as real and forces exact conjugate symmetry.
// Returns false when the pairing is inconsistent at this precision.
bool symmetrize(std::vector<Fx>& z, std::vector<bool>& real, int bits) {
    const std::size_t d = z.size();
    real.assign(d, false);
    const mpz_class threshold = mpz_class(1) << static_cast<unsigned>(bits / 2);
    std::vector<std::size_t> upper, lower;
    for (std::size_t i = 0; i < d; ++i) {
        if (abs(z[i].im) < threshold) {
            z[i].im = 0;
            real[i] = true;
        } else if (z[i].im > 0) {
            upper.push_back(i);
        } else {
            lower.push_back(i);
        }
    }
    if (upper.size() != lower.size()) return false;
    std::vector<bool> used(lower.size(), false);
    for (std::size_t u : upper) {
        std::size_t best = lower.size();
        mpz_class best_dist;
        for (std::size_t k = 0; k < lower.size(); ++k) {
            if (used[k]) continue;
            const Fx& w = z[lower[k]];
            mpz_class dre = z[u].re - w.re, dim = z[u].im + w.im;
            mpz_class dist = dre * dre + dim * dim;
            if (best == lower.size() || dist < best_dist) {
                best = k;
                best_dist = dist;
            }
        }
        used[best] = true;
        z[lower[best]].re = z[u].re;
        z[lower[best]].im = -z[u].im;
    }
    return true;
}

}  // namespace

std::complex<double> RootEnclosure::center() const { return {scaled_to_double(re, scale), scaled_to_double(im, scale)}; }

double RootEnclosure::radius_upper() const {
    double r = scaled_to_double(radius, scale);
    return std::nextafter(r, INFINITY);
}

mpq_class RootEnclosure::re_q() const {
    mpq_class q(re, mpz_class(1) << static_cast<unsigned>(scale));
    q.canonicalize();
    return q;
}

mpq_class RootEnclosure::im_q() const {
    mpq_class q(im, mpz_class(1) << static_cast<unsigned>(scale));
    q.canonicalize();
    return q;
}

mpq_class RootEnclosure::radius_q() const {
    mpq_class q(radius, mpz_class(1) << static_cast<unsigned>(scale));
    q.canonicalize();
    return q;
}

Side RootEnclosure::modulus_vs(const mpq_class& rho) const {
    const mpq_class c2 = re_q() * re_q() + im_q() * im_q();
    const mpq_class r = radius_q();
    if (r < rho) {
        mpq_class t = rho - r;
        if (c2 < t * t) return Side::Below;
    }
    mpq_class t = rho + r;
    if (c2 > t * t) return Side::Above;
    return Side::Undecided;
}

std::vector<RootEnclosure> isolate_roots(const ZPoly& p_in, int bits, const RootOptions& opts) {
    ZPoly p = p_in;
    zpoly::trim(p);
    const int d = zpoly::degree(p);
    if (d < 1) fail(ErrorCode::DegreeZero, "cannot isolate roots of a constant");
    if (bits < 2) bits = 2;

    std::vector<cld> seeds = aberth_long_double(p);
    int work = bits + 48;
    std::vector<Fx> z(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = {long_double_to_fixed(seeds[i].real(), work), long_double_to_fixed(seeds[i].imag(), work)};
    int previous = work;

    while (work <= opts.max_bits) {
        if (work != previous) {
            for (auto& v : z) {
                v.re <<= static_cast<unsigned>(work - previous);
                v.im <<= static_cast<unsigned>(work - previous);
            }
            previous = work;
        }
        FixedComplex fx(work);
        aberth_fixed(p, z, fx);

        std::vector<Fx> centers = z;
        std::vector<bool> real;
        bool ok = symmetrize(centers, real, work);
        std::vector<mpz_class> radii(centers.size());
        for (std::size_t i = 0; ok && i < centers.size(); ++i) ok = weierstrass_radius(p, centers, i, work, radii[i]);
        for (std::size_t i = 0; ok && i < centers.size(); ++i) {
            if (!real[i] && abs(centers[i].im) <= radii[i]) ok = false;
            for (std::size_t j = i + 1; ok && j < centers.size(); ++j) {
                mpz_class dre = centers[i].re - centers[j].re, dim = centers[i].im - centers[j].im;
                mpz_class sum = radii[i] + radii[j];
                if (dre * dre + dim * dim <= sum * sum) ok = false;
            }
            if (ok) {
                mpz_class lhs = radii[i] << static_cast<unsigned>(bits - 1);
                mpz_class mod2 = centers[i].re * centers[i].re + centers[i].im * centers[i].im;
                mpz_class unit2 = mpz_class(1) << static_cast<unsigned>(2 * work);
                if (lhs * lhs > std::max(mod2, unit2)) ok = false;
            }
        }
        if (ok) {
            std::vector<RootEnclosure> out(centers.size());
            for (std::size_t i = 0; i < centers.size(); ++i)
                out[i] = RootEnclosure{centers[i].re, centers[i].im, radii[i], work, static_cast<bool>(real[i])};
            std::sort(out.begin(), out.end(), [](const RootEnclosure& a, const RootEnclosure& b) {
                if (a.re != b.re) return a.re > b.re;
                return a.im > b.im;
            });
            return out;
        }
        work *= 2;
    }
    fail(ErrorCode::PrecisionExhausted,
         "root enclosures of " + zpoly::to_string(p) + " not disjoint at " + std::to_string(opts.max_bits) + " bits");
}

mpq_class RealBracket::lo_q() const {
    mpq_class q(lo, mpz_class(1) << static_cast<unsigned>(scale));
    q.canonicalize();
    return q;
}

mpq_class RealBracket::hi_q() const {
    mpq_class q(hi, mpz_class(1) << static_cast<unsigned>(scale));
    q.canonicalize();
    return q;
}

double RealBracket::approx() const { return scaled_to_double(lo + hi, scale + 1); }

bool RealBracket::narrower_than(int bits) const {
    mpz_class w = hi - lo;
    if (w <= 0) return true;
    return static_cast<int>(mpz_sizeinbase(w.get_mpz_t(), 2)) <= scale - bits;
}

int sign_at(const ZPoly& p, const mpz_class& m, int scale) {
    const int d = zpoly::degree(p);
    if (d < 0) return 0;
    mpz_class acc = p[static_cast<std::size_t>(d)];
    for (int k = d - 1; k >= 0; --k) acc = acc * m + (p[static_cast<std::size_t>(k)] << static_cast<unsigned>(scale * (d - k)));
    return sgn(acc);
}

RealBracket bracket_of(const RootEnclosure& e) { return {e.re - e.radius, e.re + e.radius, e.scale}; }

namespace {


void rescale(RealBracket& b, int scale) {
    if (scale <= b.scale) return;
    b.lo <<= static_cast<unsigned>(scale - b.scale);
    b.hi <<= static_cast<unsigned>(scale - b.scale);
    b.scale = scale;
}

// Newton step from the midpoint in fixed point at the given scale.
mpz_class newton_from(const ZPoly& p, const mpz_class& x, int scale) {
    const int d = zpoly::degree(p);
    mpz_class v = p[static_cast<std::size_t>(d)] << static_cast<unsigned>(scale), dv = 0;
    for (int k = d - 1; k >= 0; --k) {
        dv = dv * x;
        mpz_fdiv_q_2exp(dv.get_mpz_t(), dv.get_mpz_t(), static_cast<mp_bitcnt_t>(scale));
        dv += v;
        v = v * x;
        mpz_fdiv_q_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<mp_bitcnt_t>(scale));
        v += p[static_cast<std::size_t>(k)] << static_cast<unsigned>(scale);
    }
    if (dv == 0) return x;
    mpz_class step = v << static_cast<unsigned>(scale);
    mpz_fdiv_q(step.get_mpz_t(), step.get_mpz_t(), dv.get_mpz_t());
    return x - step;
}

}  // namespace

RealBracket refine_real_root(const ZPoly& p, RealBracket b, int bits) {
    if (b.lo == b.hi) return b;
    int slo = sign_at(p, b.lo, b.scale);
    int shi = sign_at(p, b.hi, b.scale);
    if (slo == 0) return {b.lo, b.lo, b.scale};
    if (shi == 0) return {b.hi, b.hi, b.scale};
    if (slo == shi) fail(ErrorCode::PrecisionExhausted, "bracket has no sign change");

    while (!b.narrower_than(bits)) {
        mpz_class w = b.hi - b.lo;
        const int correct = b.scale - static_cast<int>(mpz_sizeinbase(w.get_mpz_t(), 2));
        bool advanced = false;
        if (correct >= 24) {
            const int target = std::min(2 * correct - 8, bits + 4);
            const int scale = target + 24;
            rescale(b, scale);
            mpz_class mid = (b.lo + b.hi) >> 1;
            mpz_class x = newton_from(p, mid, scale);
            mpz_class delta = mpz_class(1) << static_cast<unsigned>(scale - target);
            mpz_class l = x - delta, h = x + delta;
            if (l > b.lo && h < b.hi && sign_at(p, l, scale) == slo && sign_at(p, h, scale) == shi) {
                b = {l, h, scale};
                advanced = true;
            }
        }
        if (!advanced) {
            for (int k = 0; k < 8; ++k) {
                rescale(b, b.scale + 1);
                mpz_class mid = (b.lo + b.hi) >> 1;
                int sm = sign_at(p, mid, b.scale);
                if (sm == 0) return {mid, mid, b.scale};
                if (sm == slo) b.lo = mid;
                else b.hi = mid;
            }
        }
    }
    return b;
}

}  // namespace bclab
