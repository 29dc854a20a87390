#include "bclab/spectra.hpp"

#include "bclab/errors.hpp"
#include "detail/fixed_complex.hpp"

#include <algorithm>
#include <cmath>

namespace bclab {

namespace {

void check_length(int N, int cap) {
    if (N < 1) fail(ErrorCode::InvalidArgument, "N must be at least 1");
    if (N > cap) fail(ErrorCode::InvalidArgument, "N = " + std::to_string(N) + " exceeds cap " + std::to_string(cap));
}

mpz_class shift_floor(const mpz_class& v, int from, int to) {
    mpz_class r = v;
    if (to >= from) return r << static_cast<unsigned>(to - from);
    mpz_fdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(from - to));
    return r;
}

mpz_class shift_ceil(const mpz_class& v, int from, int to) {
    mpz_class r = v;
    if (to >= from) return r << static_cast<unsigned>(to - from);
    mpz_cdiv_q_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(from - to));
    return r;
}

// The conjugate of `a` nearest to root r.
std::size_t match(const AlgebraicNumber& a, const RootEnclosure& r) {
    const auto c = r.center();
    std::size_t best = 0;
    double dist = INFINITY;
    for (std::size_t j = 0; j < a.conjugates().size(); ++j) {
        const double dj = std::abs(a.conjugates()[j].center() - c);
        if (dj < dist) {
            dist = dj;
            best = j;
        }
    }
    return best;
}

// Fixed-point powers z^1..z^N of one root at `bits` with a rigorous error
// bound on each, plus bounds of |z|^n.
struct RootPowers {
    std::vector<detail::Fx> values;
    std::vector<long double> errors;
    std::vector<mpz_class> mod_lo;
    std::vector<mpz_class> mod_hi;
};

RootPowers root_powers(const RootEnclosure& r, int N, int bits, bool with_moduli) {
    RootPowers out;
    const int s = r.scale;
    const mpz_class rad = shift_ceil(r.radius, s, bits) + 1;
    const detail::FixedComplex fc(bits);
    const detail::Fx c{shift_floor(r.re, s, bits), shift_floor(r.im, s, bits)};
    const long double ulp = std::ldexp(1.0L, -bits);
    const long double rr = static_cast<long double>(detail::scaled_to_double(rad, bits)) * (1 + 1e-12L);
    const long double big = std::hypot(static_cast<long double>(detail::scaled_to_double(c.re, bits)),
                                       static_cast<long double>(detail::scaled_to_double(c.im, bits))) *
                                (1 + 1e-12L) +
                            rr;
    detail::Fx z = c;
    long double e = rr, mpow = 1.0L;
    for (int n = 1; n <= N; ++n) {
        if (n > 1) {
            z = fc.mul(z, c);
            e = ((mpow + e) * rr + big * e + 2 * ulp) * (1 + 1e-12L);
        }
        out.values.push_back(z);
        out.errors.push_back(e);
        mpow *= big;
    }
    if (with_moduli) {
        mpz_class m2 = r.re * r.re + r.im * r.im, root;
        mpz_sqrt(root.get_mpz_t(), m2.get_mpz_t());
        mpz_class lo = shift_floor(root - r.radius, s, bits) - 1;
        mpz_class hi = shift_ceil(root + 1 + r.radius, s, bits) + 1;
        if (lo < 0) lo = 0;
        mpz_class plo = lo, phi = hi;
        for (int n = 1; n <= N; ++n) {
            out.mod_lo.push_back(plo);
            out.mod_hi.push_back(phi);
            plo *= lo;
            phi *= hi;
            mpz_fdiv_q_2exp(plo.get_mpz_t(), plo.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
            mpz_cdiv_q_2exp(phi.get_mpz_t(), phi.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
        }
    }
    return out;
}

mpz_class error_to_fixed(long double e, int bits) {
    return detail::long_double_to_fixed(e * (1 + 1e-12L), bits) + 1;
}

DominantPart dominant_at(const AlgebraicNumber& a, int N, int bits) {
    DominantPart out;
    out.bits = bits;
    out.moduli.assign(static_cast<std::size_t>(N), Enclosure{0, 0, bits});
    out.real_parts.assign(static_cast<std::size_t>(N), Enclosure{0, 0, bits});
    const auto roots = conjugates(a.minpoly(), bits);
    for (const auto& r : roots) {
        if (a.modulus_classes()[match(a, r)] != ModulusClass::Outside) continue;
        const RootPowers pw = root_powers(r, N, bits, true);
        for (int n = 0; n < N; ++n) {
            auto& m = out.moduli[static_cast<std::size_t>(n)];
            m.lo += pw.mod_lo[static_cast<std::size_t>(n)];
            m.hi += pw.mod_hi[static_cast<std::size_t>(n)];
            auto& re = out.real_parts[static_cast<std::size_t>(n)];
            const mpz_class err = error_to_fixed(pw.errors[static_cast<std::size_t>(n)], bits);
            re.lo += pw.values[static_cast<std::size_t>(n)].re - err;
            re.hi += pw.values[static_cast<std::size_t>(n)].re + err;
        }
    }
    return out;
}

int dominant_bits(const AlgebraicNumber& a, int N) {
    double largest = 1.0;
    for (const auto& c : a.conjugates()) largest = std::max(largest, std::abs(c.center()) + c.radius_upper());
    return static_cast<int>(std::ceil(N * std::log2(largest))) + 96;
}

}  // namespace

TraceSeries power_traces(const IntPolynomial& p, int N, int cap) {
    if (!p.is_monic()) fail(ErrorCode::NotMonic, "traces need a monic polynomial, got " + p.to_string());
    check_length(N, cap);
    const int d = p.degree();
    // c[i] is the coefficient of x^(d-i), c[0] = 1.
    const std::vector<mpz_class> c = p.descending();
    TraceSeries out;
    out.t.reserve(static_cast<std::size_t>(N));
    for (int k = 1; k <= N; ++k) {
        mpz_class v = 0;
        for (int i = 1; i <= std::min(k - 1, d); ++i) v -= c[static_cast<std::size_t>(i)] * out.t[static_cast<std::size_t>(k - i - 1)];
        if (k <= d) v -= k * c[static_cast<std::size_t>(k)];
        out.t.push_back(v);
    }
    return out;
}

DominantPart dominant_part(const AlgebraicNumber& a, int N, int cap) {
    check_length(N, cap);
    return dominant_at(a, N, dominant_bits(a, N));
}

ResidualReport trace_residual_report(const AlgebraicNumber& a, int N, int cap) {
    const TraceSeries tr = power_traces(a.minpoly(), N, cap);
    const int start = dominant_bits(a, N);
    for (int bits = start; bits <= 8 * start; bits *= 2) {
        const DominantPart dom = dominant_at(a, N, bits);
        ResidualReport rep;
        rep.s = a.s();
        bool ok = true;
        for (int n = 1; n <= N && ok; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            const mpz_class t = tr.t[i] << static_cast<unsigned>(bits);
            ResidualRow row;
            row.n = n;
            row.trace = tr.t[i];
            row.dominant = dom.moduli[i].bounded();
            row.residual = Enclosure{t - dom.moduli[i].hi, t - dom.moduli[i].lo, bits}.bounded();
            row.residual_real = Enclosure{t - dom.real_parts[i].hi, t - dom.real_parts[i].lo, bits}.bounded();
            const double scale = std::ldexp(1.0, -20) * std::max(1.0, std::fabs(row.residual.value));
            if (row.residual.error > scale || row.residual_real.error > scale) ok = false;
            double norm = std::fabs(row.residual.value);
            if (rep.s > 0) {
                const double f = std::pow(static_cast<double>(n), rep.s / 2.0);
                row.normalized = BoundedReal{row.residual.value / f, row.residual.error / f};
                norm /= f;
            }
            rep.max_normalized = std::max(rep.max_normalized, norm);
            rep.max_abs_residual = std::max(rep.max_abs_residual, std::fabs(row.residual.value));
            rep.max_abs_residual_real = std::max(rep.max_abs_residual_real, std::fabs(row.residual_real.value));
            rep.rows.push_back(std::move(row));
        }
        if (ok) return rep;
    }
    fail(ErrorCode::PrecisionExhausted, "trace residual error bound exceeds the residual scale");
}

std::vector<PartialSumSeries> unit_circle_partial_sums(const AlgebraicNumber& a, int N, int cap) {
    if (!classify(a).is_salem) fail(ErrorCode::NotSalem, a.minpoly().to_string() + " is not a Salem polynomial");
    check_length(N, cap);
    const int bits = 128;
    const auto roots = conjugates(a.minpoly(), bits);
    std::vector<PartialSumSeries> out;
    for (const auto& r : roots) {
        const std::size_t j = match(a, r);
        if (a.modulus_classes()[j] != ModulusClass::OnCircle) continue;
        const RootPowers pw = root_powers(r, N, bits, false);
        PartialSumSeries series;
        series.conjugate = j;
        series.argument = std::arg(r.center());
        mpz_class sum = 0;
        long double err = 0;
        for (int n = 0; n < N; ++n) {
            sum += pw.values[static_cast<std::size_t>(n)].re;
            err += pw.errors[static_cast<std::size_t>(n)];
            const BoundedReal v{detail::scaled_to_double(sum, bits), static_cast<double>(err) + std::ldexp(1.0, -50)};
            series.sup = std::max(series.sup, std::fabs(v.value));
            series.sums.push_back(v);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (int n = (N + 1) / 2; n <= N; ++n) {
            const double v = std::fabs(series.sums[static_cast<std::size_t>(n - 1)].value);
            if (n < 1 || v < 1e-12) continue;
            const double x = std::log(static_cast<double>(n)), y = std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
        const double den = count * sxx - sx * sx;
        if (count >= 2 && den > 0) series.exponent = (count * sxy - sx * sy) / den;
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace bclab
