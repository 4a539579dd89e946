#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/estimate.hpp"

namespace rfic {

// First-passage record of a fresh walk. Strict ascending: first n with
// S_n > 0, height S_n; weak mode uses >= (height may be 0). Descending
// mirrors with < / <=, height recorded positive (or zero).
struct LadderSample {
    double height = 0.0;
    long epoch = 0;
};

struct LadderOptions {
    bool ascending = true;
    bool strict = true;
    // Epoch cap; capped attempts are discarded and redrawn. The ladder epoch
    // has infinite mean (P[alpha > m] ~ m^{-1/2}), so the cap bounds runtime;
    // the censoring bias on height moments is O(cap^{-1/2}).
    long max_epoch = 1000000L;
};

// Strict and weak first-passage records of the same walk (they differ only
// when the walk returns exactly to 0 first, e.g. for lattice laws).
struct DualLadderSample {
    LadderSample strict;
    LadderSample weak;
};

std::vector<DualLadderSample> dual_ladder_samples(const DisorderLaw& law, bool ascending,
                                                  long max_epoch, std::size_t n,
                                                  SplitMix64& g);

std::vector<LadderSample> ladder_samples(const DisorderLaw& law, LadderOptions opt,
                                         std::size_t n, SplitMix64& g);

// Ratio E[H^2]/E[H] with first-order delta-method stderr.
Estimate ladder_ratio(const std::vector<LadderSample>& samples, std::uint64_t seed);

struct KappaHat {
    Estimate strict; // 1/2 (E[H<^2]/E[H<] + E[H>^2]/E[H>]), strict ladders
    Estimate weak;   // same with weak ladder heights (zeros included)
};

KappaHat kappa_hat(const DisorderLaw& law, std::size_t n_samples,
                   std::uint64_t master_seed, int threads = 0);

// Both environment functionals of the log-sum around deep gamma-minima:
// `inner` sums e^{-2 S} strictly between tau^-_{gamma/2} and tau^+_{gamma/2},
// `full` over the whole two-stretch window. They share the Gamma->infinity
// limit (the conditioned-walk constant).
struct KappaTildeResult {
    double gamma = 0.0;
    Estimate inner;
    Estimate full;
    bool spread_warning = false; // |inner - full| above combined stderr
};

std::vector<KappaTildeResult> kappa_tilde(const DisorderLaw& law,
                                          const std::vector<double>& gammas,
                                          std::size_t n_envs,
                                          std::uint64_t master_seed, int threads = 0);

inline double lindley_step(double y, double z) { return y + z > 0.0 ? y + z : 0.0; }

// Nondecreasing right-continuous cumulative mass function represented by
// weighted atoms; not necessarily a probability (renewal measures grow ~x).
class EmpiricalCdf {
public:
    EmpiricalCdf() = default;
    // Atoms need not be sorted or distinct; weights must be >= 0.
    EmpiricalCdf(std::vector<double> atoms, std::vector<double> weights);
    static EmpiricalCdf point_mass(double x);

    double operator()(double x) const; // scale * (total weight of atoms <= x)
    void rescale(double factor) { scale_ *= factor; }
    double scale() const { return scale_; }

    std::size_t size() const { return xs_.size(); }
    double atom(std::size_t i) const { return xs_[i]; }
    double weight(std::size_t i) const {
        return scale_ * (i == 0 ? cum_[0] : cum_[i] - cum_[i - 1]);
    }
    double total_mass() const { return xs_.empty() ? 0.0 : scale_ * cum_.back(); }
    double max_atom() const { return xs_.empty() ? 0.0 : xs_.back(); }

private:
    std::vector<double> xs_;  // sorted distinct atoms
    std::vector<double> cum_; // cumulative weights
    double scale_ = 1.0;
};

// Monte Carlo of the renewal-sum invariant CDF of the Lindley chain driven by
// z = 2h (left edge) or -z (right edge), rescaled so the fitted slope over
// [x_max/2, 0.9 x_max] is exactly 1 (c_nu = 1 normalization).
EmpiricalCdf lindley_cdf_renewal(const DisorderLaw& law, bool left_edge,
                                 double x_max, std::size_t n_chains, SplitMix64& g);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double ratio = 0.0;        // intercept / slope
    double max_residual = 0.0; // max |residual| over the fit grid
    bool curvature_warning = false;
};

// Least-squares line through F over [x_lo, x_hi], sampled at the jump points
// (step-centered) when enough fall in the window, else on a uniform grid.
LineFit asymptote_fit(const EmpiricalCdf& cdf, double x_lo, double x_hi,
                      int grid_points = 256);

struct PatchedMeasure {
    double gamma = 0.0;
    double C = 0.0;      // C_Gamma = F_left(Gamma) + F_right(Gamma)
    EmpiricalCdf cdf;    // probability measure supported on [-Gamma, Gamma]
};

// F(x) = F_left(x+Gamma)/C for x <= 0, 1 - F_right(Gamma-x)/C for x >= 0.
// Throws if C <= 0.
PatchedMeasure patched_measure(const EmpiricalCdf& F_left, const EmpiricalCdf& F_right,
                               double gamma);

// M_Gamma[nu] = integral of F_nu(z - Gamma) F_zeta(-z) dz, evaluated exactly
// atom-by-atom through the closed-form mean excess of zeta.
double m_gamma_functional(const EmpiricalCdf& nu, const DisorderLaw& law, double gamma);

// kappa_hat_1 = 1/2 * integral of F_left(z) F_zeta(-z) dz (identified with
// theta^2 in the expansion).
double kappa_hat_1(const EmpiricalCdf& F_left, const DisorderLaw& law);

// Wasserstein-1 via exact piecewise integration of |F_a - F_b|; both inputs
// must be probability CDFs (equal total mass).
double wasserstein_1(const EmpiricalCdf& a, const EmpiricalCdf& b);

} // namespace rfic
