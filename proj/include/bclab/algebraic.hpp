#pragma once

#include "bclab/polynomial.hpp"
#include "bclab/roots.hpp"

#include <optional>
#include <vector>

namespace bclab {

// |true value - value| <= error.
struct BoundedReal {
    double value = 0.0;
    double error = 0.0;

    bool contains(double x) const { return x >= value - error && x <= value + error; }
};

enum class ModulusClass { Inside, OnCircle, Outside };

struct AlgebraicOptions {
    int bits = 128;       // requested precision of the stored enclosures
    int max_bits = 2048;  // escalation cap for certified comparisons
    int degree_cap = 24;
};

class AlgebraicNumber {
public:
    const IntPolynomial& minpoly() const { return minpoly_; }
    const std::vector<RootEnclosure>& conjugates() const { return conjugates_; }
    std::size_t theta_index() const { return theta_index_; }
    const RootEnclosure& theta() const { return conjugates_[theta_index_]; }
    double theta_approx() const { return theta().center().real(); }
    int degree() const { return minpoly_.degree(); }
    // Number of non-real conjugates.
    int s() const { return s_; }
    // Position of each conjugate relative to the unit circle, decided exactly.
    const std::vector<ModulusClass>& modulus_classes() const { return classes_; }
    BoundedReal mahler() const { return mahler_; }
    // Set when theta lies outside (1, 2); every operation stays defined.
    bool outside_unit_interval() const { return outside_1_2_; }
    const AlgebraicOptions& options() const { return opts_; }

    // Dyadic bracket around theta of width <= 2^-bits.
    RealBracket theta_bracket(int bits) const;

    // Builds the number with the given conjugate as theta. The conjugate must
    // be real and certified > 1.
    static AlgebraicNumber with_root(const IntPolynomial& p, std::vector<RootEnclosure> conj, std::size_t index,
                                     const AlgebraicOptions& opts = {});

private:
    AlgebraicNumber() = default;
    IntPolynomial minpoly_ = IntPolynomial::from_ascending({0, 1});
    std::vector<RootEnclosure> conjugates_;
    std::size_t theta_index_ = 0;
    int s_ = 0;
    std::vector<ModulusClass> classes_;
    BoundedReal mahler_;
    bool outside_1_2_ = false;
    AlgebraicOptions opts_;
};

struct IrreducibilityVerdict {
    enum class Kind { Irreducible, Reducible, Inconclusive };
    Kind kind = Kind::Inconclusive;
    std::optional<IntPolynomial> factor;  // set for Reducible
};

IrreducibilityVerdict irreducibility_check(const IntPolynomial& p, int degree_cap = 24);
// Throws Reducible (with the factor in the message) or DegreeCapExceeded.
void require_irreducible(const IntPolynomial& p, int degree_cap = 24);

std::vector<RootEnclosure> conjugates(const IntPolynomial& p, int bits);

// Largest real root certified > 1. Throws NoRealRootAboveOne.
AlgebraicNumber select_theta(const IntPolynomial& p, std::vector<RootEnclosure> conj, const AlgebraicOptions& opts = {});

// parse-level convenience: irreducibility check, conjugates, select_theta.
AlgebraicNumber make_algebraic(const IntPolynomial& p, const AlgebraicOptions& opts = {});

// Product of |theta_j| over conjugates outside the unit disc; no leading
// coefficient factor.
BoundedReal mahler_measure(const AlgebraicNumber& a);

struct ClassificationReport {
    bool is_algebraic_integer = false;
    bool is_unit = false;
    mpz_class height;
    bool is_pisot = false;
    bool is_salem = false;
    bool is_perron = false;
    bool is_garsia = false;
    bool has_minus_theta_conjugate = false;
    bool in_range_1_2 = false;
    BoundedReal mahler;
};

ClassificationReport classify(const AlgebraicNumber& a);

// Minimal polynomial of sqrt(theta) with sqrt(theta) selected as the new theta.
AlgebraicNumber square_root(const AlgebraicNumber& a);

struct SqrtTower {
    AlgebraicNumber alpha;
    int steps = 0;  // alpha^(2^steps) == theta
};

// Repeats square_root while the minimal polynomial has only even powers.
SqrtTower sqrt_tower_reduce(const AlgebraicNumber& a, int max_steps = 6);

// Smallest-degree integer factor of p vanishing at roots[target], found by
// subset-product reconstruction over conjugate-closed root sets.
ZPoly minimal_factor(const ZPoly& p, const std::vector<RootEnclosure>& roots, std::size_t target);

}  // namespace bclab
