#pragma once

#include <cstddef>
#include <span>

#include "rfic/disorder.hpp"
#include "rfic/estimate.hpp"

namespace rfic {

struct BoundaryCondition {
    int g = +1; // left spin, +-1
    int d = +1; // right spin, +-1
};

struct LogPartition {
    double value = 0.0; // log Z
    std::size_t N = 0;
    double J = 0.0;
    BoundaryCondition bc;
};

// Renormalized 2x2 transfer step T_h * Q_J: entries are kept in (0, 1] and the
// running magnitude lives in log_scale, so products of 1e9 factors neither
// overflow nor underflow.
struct TransferMatrix {
    double a = 1.0, b = 0.0; // row +1: (+,+), (+,-)
    double c = 0.0, d = 1.0; // row -1: (-,+), (-,-)
    double log_scale = 0.0;

    // Entries proportional to (e^h, e^{-2J+h}; e^{-2J-h}, e^{-h}).
    static TransferMatrix step(double h, double J);

    void multiply_right(const TransferMatrix& m); // this = this * m, renormalized
    void renormalize();                           // divide by max entry, accumulate log
};

// log of the (g,d) coefficient of Q_J T_{h1} Q_J ... T_{hN} Q_J.
// Rejects N = 0 and J <= 0 (std::invalid_argument).
LogPartition log_partition(std::span<const double> h, double J, BoundaryCondition bc);

// Log-sum-exp over all 2^N configurations; N <= 20 enforced.
LogPartition brute_force_log_partition(std::span<const double> h, double J,
                                       BoundaryCondition bc);

// Energy of one configuration, walls counted against boundary spins too.
double config_energy_spins(std::span<const int> spins, std::span<const double> h,
                           double J, BoundaryCondition bc);

// Replica mean of (1/N) log Z^{++}; stderr is between-replica.
Estimate free_energy_estimate(const DisorderLaw& law, double J, std::size_t N,
                              int replicas, std::uint64_t master_seed,
                              int threads = 0, BoundaryCondition bc = {+1, +1});

} // namespace rfic
