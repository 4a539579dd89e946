#include "rfic/maxenergy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfic {

EnergyState dp_step(EnergyState s, double h, double J) {
    EnergyState n;
    n.m_plus = std::max(s.m_plus + h, s.m_minus - 2.0 * J - h);
    n.m_minus = std::max(s.m_plus - 2.0 * J + h, s.m_minus - h);
    return n;
}

double x_chain_step(double x, double h, double J) {
    double gamma = 2.0 * J;
    return std::clamp(x + 2.0 * h, -gamma, gamma);
}

namespace {

// DP along h for left boundary +; reads m_plus (d=+) or m_minus (d=-).
// Long runs store (m_plus, x) so only the bounded x accumulates many maxima;
// m_plus itself grows linearly and is tracked directly in double (exact for
// the additions involved at these magnitudes).
double max_energy_left_plus(std::span<const double> h, double J, int d) {
    double gamma = 2.0 * J;
    double m_plus = 0.0;
    double x = gamma; // m_minus = m_plus - x, initial (0, -2J)
    for (double hn : h) {
        m_plus += hn + std::max(0.0, -x - gamma - 2.0 * hn);
        x = std::clamp(x + 2.0 * hn, -gamma, gamma);
    }
    return d == +1 ? m_plus : m_plus - x;
}

} // namespace

double max_energy(std::span<const double> h, double J, BoundaryCondition bc) {
    if (h.empty()) throw std::invalid_argument("max_energy: N must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("max_energy: J must be > 0");
    if (bc.g == +1) return max_energy_left_plus(h, J, bc.d);
    // Spin-flip symmetry: negate the field and swap the right boundary.
    std::vector<double> neg(h.begin(), h.end());
    for (double& v : neg) v = -v;
    return max_energy_left_plus(neg, J, -bc.d);
}

double config_energy(const SpinConfig& cfg, std::span<const double> h, double J) {
    double e = -2.0 * J * static_cast<double>(cfg.wall_positions.size());
    int spin = cfg.bc.g;
    std::size_t wi = 0;
    for (std::size_t i = 0; i < cfg.N; ++i) {
        // Wall at position i flips the spin between sites i and i+1.
        while (wi < cfg.wall_positions.size() &&
               cfg.wall_positions[wi] == static_cast<long>(i)) {
            spin = -spin;
            ++wi;
        }
        e += h[i] * spin;
    }
    return e;
}

BruteForceMax brute_force_max(std::span<const double> h, double J,
                              BoundaryCondition bc) {
    if (h.empty()) throw std::invalid_argument("brute_force_max: N must be >= 1");
    if (h.size() > 20) throw std::invalid_argument("brute_force_max: N must be <= 20");
    const std::size_t n = h.size();
    double best = -1e300;
    std::uint32_t best_mask = 0;
    std::vector<int> spins(n);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            spins[i] = (mask >> (n - 1 - i)) & 1u ? -1 : +1;
        }
        double e = config_energy_spins(spins, h, J, bc);
        if (e > best) { // strict: ties keep the lexicographically smallest mask
            best = e;
            best_mask = mask;
        }
    }
    BruteForceMax out;
    out.value = best;
    out.argmax.N = n;
    out.argmax.bc = bc;
    int prev = bc.g;
    for (std::size_t i = 0; i < n; ++i) {
        int s = (best_mask >> (n - 1 - i)) & 1u ? -1 : +1;
        if (s != prev) out.argmax.wall_positions.push_back(static_cast<long>(i));
        prev = s;
    }
    if (prev != bc.d) out.argmax.wall_positions.push_back(static_cast<long>(n));
    return out;
}

Estimate dp_max_energy_estimate(const DisorderLaw& law, double J, std::size_t N,
                                int replicas, std::uint64_t master_seed, int threads) {
    if (N == 0) throw std::invalid_argument("dp_max_energy_estimate: N must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("dp_max_energy_estimate: J must be > 0");
    double gamma = 2.0 * J;
    SplitMix64 master(master_seed);
    auto one = [&](int r) {
        SplitMix64 g = master.split(static_cast<std::uint64_t>(r));
        double m_plus = 0.0;
        double x = gamma;
        for (std::size_t i = 0; i < N; ++i) {
            double hn = law.sample(g);
            m_plus += hn + std::max(0.0, -x - gamma - 2.0 * hn);
            x = std::clamp(x + 2.0 * hn, -gamma, gamma);
        }
        return m_plus / static_cast<double>(N);
    };
    auto values = parallel_replicas(replicas, threads, one);
    return aggregate(values, master_seed);
}

std::size_t default_burn_in(const DisorderLaw& law, double J) {
    double gamma = 2.0 * J;
    return 10 * static_cast<std::size_t>(std::ceil(gamma * gamma / law.variance()));
}

ErgodicResult ergodic_max_energy(const DisorderLaw& law, double J, std::size_t N,
                                 std::size_t burn_in, int replicas,
                                 std::uint64_t master_seed, int threads) {
    if (!(J > 0.0)) throw std::invalid_argument("ergodic_max_energy: J must be > 0");
    if (N <= burn_in) throw std::invalid_argument("ergodic_max_energy: N must exceed burn_in");
    double gamma = 2.0 * J;
    ErgodicResult res;
    res.burn_in_warning =
        static_cast<double>(burn_in) < 8.0 * gamma * gamma / law.variance() &&
        burn_in != 0; // burn_in == 0 is the exact telescoped sum, not a bias risk
    SplitMix64 master(master_seed);
    auto one = [&](int r) {
        SplitMix64 g = master.split(static_cast<std::uint64_t>(r));
        double x = gamma;
        double acc = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            double hn = law.sample(g);
            if (n >= burn_in) acc += hn + std::max(0.0, -x - gamma - 2.0 * hn);
            x = std::clamp(x + 2.0 * hn, -gamma, gamma);
        }
        return acc / static_cast<double>(N - burn_in);
    };
    auto values = parallel_replicas(replicas, threads, one);
    res.estimate = aggregate(values, master_seed);
    return res;
}

SpinConfig reconstruct_maximal_config(const GammaDecomposition& d) {
    if (d.t.empty() || d.t.size() % 2 != 0) {
        throw std::invalid_argument(
            "reconstruct_maximal_config: decomposition must end at an even t-index");
    }
    SpinConfig cfg;
    cfg.bc = BoundaryCondition{+1, +1};
    cfg.N = static_cast<std::size_t>(d.t.back());
    cfg.wall_positions.assign(d.u.begin(), d.u.end());
    return cfg;
}

} // namespace rfic
