#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/estimate.hpp"
#include "rfic/extrema.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

// (M+_n, M-_n): maximal energies with right boundary forced to + / -.
// Initial state (0, -2J); after one step |m_plus - m_minus| <= 2J.
struct EnergyState {
    double m_plus = 0.0;
    double m_minus = 0.0;
    double x() const { return m_plus - m_minus; }
};

// Wall positions in [0, N]: position k means spins k and k+1 disagree, with
// spin 0 = bc.g and spin N+1 = bc.d.
struct SpinConfig {
    std::size_t N = 0;
    std::vector<long> wall_positions;
    BoundaryCondition bc;
};

EnergyState dp_step(EnergyState s, double h_next, double J);

// Clamp recursion for X = M+ - M-; note the doubled increment z = 2h.
double x_chain_step(double x, double h_next, double J);

// Exact ground-state energy M^{gd}_{N,J,h} via the two-component DP.
double max_energy(std::span<const double> h, double J, BoundaryCondition bc);

struct BruteForceMax {
    double value = 0.0;
    SpinConfig argmax; // lexicographically smallest maximizer, all-plus first
};

// Max over all 2^N configurations; N <= 20 enforced.
BruteForceMax brute_force_max(std::span<const double> h, double J, BoundaryCondition bc);

double config_energy(const SpinConfig& cfg, std::span<const double> h, double J);

// Replica mean of max_energy/N on fresh disorder (the per-site DP estimator).
Estimate dp_max_energy_estimate(const DisorderLaw& law, double J, std::size_t N,
                                int replicas, std::uint64_t master_seed,
                                int threads = 0);

// Time average of h_{n+1} + max(0, -X_n - Gamma - 2 h_{n+1}) over
// n in (burn_in, N] along the X-chain. burn_in = 0 reproduces the DP sum
// exactly (the telescoped M+ increment). burn_in below 8*Gamma^2/theta^2
// triggers a warning flag in the returned struct.
struct ErgodicResult {
    Estimate estimate;
    bool burn_in_warning = false;
};
ErgodicResult ergodic_max_energy(const DisorderLaw& law, double J, std::size_t N,
                                 std::size_t burn_in, int replicas,
                                 std::uint64_t master_seed, int threads = 0);

// Default burn-in: 10 * ceil(Gamma^2 / theta^2).
std::size_t default_burn_in(const DisorderLaw& law, double J);

// bc=++ configuration with walls at u_1..u_{2K}; the decomposition must end
// at an even t-index and the walk must be truncated at N = t_{2K}.
SpinConfig reconstruct_maximal_config(const GammaDecomposition& d);

} // namespace rfic
