#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rfic/rng.hpp"

namespace rfic {

enum class LawKind {
    Gaussian,     // N(0, sigma^2)
    Rademacher,   // +-a with equal probability
    Laplace,      // density exp(-|x|/b) / (2b)
    Uniform,      // uniform on [-a, a]
    LogisticSech, // density 1/(2 cosh(x))^2 * 2 = sech^2(x)/2; 2h is standard logistic
};

// A centered disorder law with finite variance. Immutable and shareable;
// sampling is driven by a caller-owned SplitMix64 stream so replicas stay
// deterministic and independent.
//
// Every draw consumes exactly one generator output, so stream positions are
// predictable and skip-ahead composes with sampling.
//
// Note: Rademacher is a lattice law; its walk has no density at any n, so
// the second-order asymptotics that require a density are not guaranteed for
// it. It is kept in the registry because its ladder heights are deterministic
// (exact test vector).
class DisorderLaw {
public:
    static DisorderLaw gaussian(double sigma);
    static DisorderLaw rademacher(double a);
    static DisorderLaw laplace(double b);
    static DisorderLaw uniform(double halfwidth);
    static DisorderLaw logistic_sech();

    // Parses "gaussian:1", "rademacher:1", "laplace:0.5", "uniform:2",
    // "logistic_sech". Throws std::invalid_argument on bad spec.
    static DisorderLaw parse(const std::string& spec);

    LawKind kind() const { return kind_; }
    double param() const { return param_; }
    std::string spec() const;

    // Exact variance (theta^2).
    double variance() const;

    // False only for rademacher (no density after any n-fold convolution).
    bool has_density() const { return kind_ != LawKind::Rademacher; }

    double sample(SplitMix64& g) const;
    std::vector<double> sample_increments(SplitMix64& g, std::size_t n) const;

    // Closed forms for the doubled increment z = 2h (the T-walk of the
    // reduced-chain computations).
    double z_cdf(double z) const;           // P[z <= x]
    double z_mean_excess(double a) const;   // E[(-z - a)^+]

private:
    DisorderLaw(LawKind kind, double param) : kind_(kind), param_(param) {}

    LawKind kind_;
    double param_;
};

// Prefix sums with S_0 = 0; |S| = |h| + 1.
std::vector<double> walk_from_increments(std::span<const double> h);

// Inverse of the standard normal CDF, accurate to ~1e-15.
double inverse_normal_cdf(double p);

} // namespace rfic
