#pragma once

#include "bclab/polynomial.hpp"
#include "bclab/powersum.hpp"

#include <filesystem>
#include <optional>

namespace bclab {

// On-disk store of level sets, one file per (minpoly, n, alphabet, first
// exponent). Values are not stored; they are recomputed on load.
class LevelCache {
public:
    explicit LevelCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const IntPolynomial& p, int n, DigitAlphabet alphabet, long first_exponent) const;

    // Empty on a miss or an unreadable record.
    std::optional<LevelSet> load(const IntPolynomial& p, int n, DigitAlphabet alphabet, long first_exponent) const;
    // Atomic publish; throws CacheIO on failure.
    void store(const IntPolynomial& p, const LevelSet& level) const;

private:
    std::filesystem::path dir_;
};

}  // namespace bclab
