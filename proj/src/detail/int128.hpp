#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>

namespace bclab::detail {

inline mpz_class to_mpz(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_class out = static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64));
    out <<= 64;
    out += static_cast<unsigned long>(static_cast<std::uint64_t>(m));
    return neg ? mpz_class(-out) : out;
}

// Empty when |v| >= 2^127.
inline std::optional<__int128> to_int128(const mpz_class& v) {
    if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) return std::nullopt;
    mpz_class a = abs(v);
    mpz_class high = a >> 64;
    mpz_class low = a - (high << 64);
    unsigned __int128 m = static_cast<unsigned __int128>(high.get_ui()) << 64 | low.get_ui();
    __int128 out = static_cast<__int128>(m);
    return sgn(v) < 0 ? -out : out;
}

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace bclab::detail
