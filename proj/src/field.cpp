#include "bclab/field.hpp"

#include "bclab/errors.hpp"
#include "detail/fixed_complex.hpp"

#include <algorithm>
#include <cmath>

namespace bclab {

double Enclosure::approx() const { return detail::scaled_to_double(lo + hi, bits + 1); }

double Enclosure::width() const {
    double w = detail::scaled_to_double(hi - lo, bits);
    return std::nextafter(w, INFINITY);
}

BoundedReal Enclosure::bounded() const {
    BoundedReal b;
    b.value = approx();
    const double w = width();
    b.error = std::nextafter(w / 2 + std::abs(b.value) * std::ldexp(1.0, -52), INFINITY);
    return b;
}

Enclosure Enclosure::rescaled(int new_bits) const {
    if (new_bits <= bits) return *this;
    const auto shift = static_cast<unsigned>(new_bits - bits);
    return {lo << shift, hi << shift, new_bits};
}

int compare(const Enclosure& a, const Enclosure& b) {
    const int bits = std::max(a.bits, b.bits);
    const Enclosure x = a.rescaled(bits), y = b.rescaled(bits);
    if (x.hi < y.lo) return -1;
    if (x.lo > y.hi) return 1;
    return 0;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
    const int bits = std::max(a.bits, b.bits);
    const Enclosure x = a.rescaled(bits), y = b.rescaled(bits);
    return {x.lo - y.hi, x.hi - y.lo, bits};
}

ThetaField::ThetaField(const AlgebraicNumber& a) : a_(a) {
    const ZPoly& p = a_.minpoly().ascending();
    // theta^-1 = -(c_1 + c_2 theta + ... ) / c_0
    QPoly inv(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) inv[i - 1] = mpq_class(-p[i], p[0]);
    for (auto& c : inv) c.canonicalize();
    inv_theta_ = reduce(std::move(inv));
    // p(x) = (x - 1) h(x) + p(1)  =>  1 / (theta - 1) = -h(theta) / p(1)
    const std::size_t d = p.size() - 1;
    ZPoly h(d);
    mpz_class carry = 0;
    for (std::size_t i = d; i-- > 0;) {
        carry += p[i + 1];
        h[i] = carry;
    }
    const mpz_class p1 = carry + p[0];
    QPoly t(d);
    for (std::size_t i = 0; i < d; ++i) {
        t[i] = mpq_class(-h[i], p1);
        t[i].canonicalize();
    }
    support_end_ = reduce(std::move(t));
}

ThetaField::Element ThetaField::reduce(QPoly q) const {
    zpoly::trim(q);
    if (static_cast<int>(q.size()) > degree()) q = zpoly::rem(std::move(q), a_.minpoly().ascending());
    return q;
}

ThetaField::Element ThetaField::add(const Element& x, const Element& y) const {
    QPoly r(std::max(x.size(), y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
    for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
    zpoly::trim(r);
    return r;
}

ThetaField::Element ThetaField::sub(const Element& x, const Element& y) const {
    QPoly r(std::max(x.size(), y.size()));
    for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
    for (std::size_t i = 0; i < y.size(); ++i) r[i] -= y[i];
    zpoly::trim(r);
    return r;
}

ThetaField::Element ThetaField::mul(const Element& x, const Element& y) const {
    if (x.empty() || y.empty()) return {};
    QPoly r(x.size() + y.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    return reduce(std::move(r));
}

ThetaField::Element ThetaField::scale(const Element& x, const mpq_class& c) const {
    Element r = x;
    for (auto& v : r) v *= c;
    zpoly::trim(r);
    return r;
}

ThetaField::Element ThetaField::theta_power(long k) const {
    Element base = k >= 0 ? reduce(QPoly{0, 1}) : inv_theta_;
    unsigned long e = static_cast<unsigned long>(k >= 0 ? k : -k);
    Element result = reduce(QPoly{1});
    while (e) {
        if (e & 1) result = mul(result, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return result;
}

ThetaField::Element ThetaField::digits_value(std::span<const int> digits, long first_exponent) const {
    Element acc;
    // Horner from the top digit, then shift by theta^first_exponent.
    const Element x = reduce(QPoly{0, 1});
    for (std::size_t j = digits.size(); j-- > 0;) {
        acc = mul(acc, x);
        if (digits[j] != 0) acc = add(acc, QPoly{mpq_class(digits[j])});
    }
    return mul(acc, theta_power(first_exponent));
}

std::shared_ptr<const ThetaField::Powers> ThetaField::powers(int bits, int max_exponent) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(bits);
        if (it != cache_.end() && static_cast<int>(it->second->lo.size()) > max_exponent) return it->second;
    }
    max_exponent = std::max({max_exponent, degree(), 64});
    const int guard = 32;
    const int work = bits + guard;
    const double growth = std::log2(a_.theta_approx() + 1.0);
    const int bracket_bits = work + 16 + static_cast<int>(std::ceil(max_exponent * growth)) +
                             static_cast<int>(std::log2(max_exponent + 1.0)) + 1;
    const RealBracket b = a_.theta_bracket(bracket_bits);
    auto out = std::make_shared<Powers>();
    out->bits = bits;
    mpz_class lo = mpz_class(1) << static_cast<unsigned>(work), hi = lo;
    for (int k = 0; k <= max_exponent; ++k) {
        mpz_class l = lo, h = hi;
        mpz_fdiv_q_2exp(l.get_mpz_t(), l.get_mpz_t(), guard);
        mpz_cdiv_q_2exp(h.get_mpz_t(), h.get_mpz_t(), guard);
        out->lo.push_back(l);
        out->hi.push_back(h);
        lo *= b.lo;
        hi *= b.hi;
        mpz_fdiv_q_2exp(lo.get_mpz_t(), lo.get_mpz_t(), static_cast<mp_bitcnt_t>(b.scale));
        mpz_cdiv_q_2exp(hi.get_mpz_t(), hi.get_mpz_t(), static_cast<mp_bitcnt_t>(b.scale));
    }
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = cache_[bits];
    if (!slot || slot->lo.size() < out->lo.size()) slot = out;
    return slot;
}

Enclosure ThetaField::enclose_power(int k, int bits) const {
    auto pw = powers(bits, k);
    return {pw->lo[static_cast<std::size_t>(k)], pw->hi[static_cast<std::size_t>(k)], bits};
}

Enclosure ThetaField::enclose(const Element& x, int bits) const {
    Enclosure e{0, 0, bits};
    if (x.empty()) return e;
    auto pw = powers(bits, static_cast<int>(x.size()));
    mpz_class den = 1;
    for (const auto& c : x) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        const mpz_class n = x[i].get_num() * (den / x[i].get_den());
        if (n > 0) {
            e.lo += n * pw->lo[i];
            e.hi += n * pw->hi[i];
        } else {
            e.lo += n * pw->hi[i];
            e.hi += n * pw->lo[i];
        }
    }
    mpz_fdiv_q(e.lo.get_mpz_t(), e.lo.get_mpz_t(), den.get_mpz_t());
    mpz_cdiv_q(e.hi.get_mpz_t(), e.hi.get_mpz_t(), den.get_mpz_t());
    return e;
}

int ThetaField::sign(const Element& x) const {
    if (x.empty()) return 0;
    for (int bits = 64; bits <= kMaxSignBits; bits *= 2) {
        Enclosure e = enclose(x, bits);
        if (e.lo > 0) return 1;
        if (e.hi < 0) return -1;
    }
    fail(ErrorCode::PrecisionExhausted, "sign of a nonzero element not resolved at " + std::to_string(kMaxSignBits) + " bits");
}

std::string element_to_string(const ThetaField::Element& x) {
    std::string out = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) out += ",";
        out += x[i].get_str();
    }
    return out + "]";
}

}  // namespace bclab
