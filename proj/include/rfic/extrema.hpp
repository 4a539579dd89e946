#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/estimate.hpp"

namespace rfic {

// Alternating record structure of a walk at resolution gamma. Odd indices are
// gamma-maxima, even indices gamma-minima (the walk is first scanned for a
// gamma-decrease). All index lists are 1-based conceptually; element j-1 of
// each vector holds t_j / u_j / u_j^+.
struct GammaDecomposition {
    double gamma = 0.0;
    std::vector<long> t;
    std::vector<long> u;
    std::vector<long> u_plus;
    std::vector<double> s_u; // walk value at u_j (== value at u_j^+)
    bool complete = false;   // at least one full period (t_1 and t_2 found)
};

struct StretchSample {
    bool descending = false;
    double height = 0.0; // >= gamma
    long length = 0;     // >= 1
};

// Recentered walk around a gamma-minimum: values[i] = S[u_k + offset_lo + i]
// - S[u_k], offsets offset_lo..offset_hi with offset_lo <= 0 <= offset_hi,
// values[-offset_lo] == 0 and all values >= 0.
struct Environment {
    long offset_lo = 0;  // u_{k-1} - u_k
    long offset_hi = 0;  // u_{k+1}^+ - u_k
    long tau_minus = 0;  // last n <= 0 with value >= gamma/2
    long tau_plus = 0;   // first n >= 0 with value >= gamma/2
    std::vector<double> values;

    double at(long offset) const { return values[static_cast<std::size_t>(offset - offset_lo)]; }
};

// Single left-to-right pass over a walk given as values S_0..S_N. Returns the
// partial decomposition found; `complete` marks whether a full period exists.
GammaDecomposition decompose(std::span<const double> S, double gamma);

// Heights/lengths of the 2K-1 stretches between consecutive extrema.
std::vector<StretchSample> stretch_samples(const GammaDecomposition& d,
                                           std::span<const double> S);

// k is the 1-based even index of a gamma-minimum; stretches k-1 and k must be
// fully contained (u_{k+1}^+ known). Throws std::invalid_argument otherwise.
Environment environment_around_minimum(std::span<const double> S,
                                       const GammaDecomposition& d, std::size_t k);

// Incremental decomposer: feed increments one at a time; extrema records are
// appended to t()/u()/u_plus() as they are finalized. The caller controls how
// much of the walk stays buffered via drop_before, so long runs use bounded
// memory (about two stretches when environments are needed).
class StreamingDecomposer {
public:
    explicit StreamingDecomposer(double gamma);

    void push(double h);

    std::size_t extrema_count() const { return u_.size(); }
    long t(std::size_t j) const { return t_[j]; }           // 0-based: t_{j+1}
    long u(std::size_t j) const { return u_[j]; }
    long u_plus(std::size_t j) const { return u_plus_[j]; }
    double s_u(std::size_t j) const { return s_u_[j]; }

    long steps() const { return n_; }
    double value(long i) const; // S_i, i within the retained window
    long window_start() const { return win_start_; }
    void drop_before(long i);

    GammaDecomposition snapshot() const;

private:
    double gamma_;
    long n_ = 0;             // index of the last walk point present
    long win_start_ = 0;     // absolute index of buffer_[0]
    std::vector<double> buffer_; // S values from win_start_ to n_
    long last_t_ = 0;        // t_j of the phase in progress (t_0 = 0)
    bool seeking_decrease_ = true;
    double run_ext_;         // running max (decrease phase) or min since last_t_
    std::vector<long> t_, u_, u_plus_;
    std::vector<double> s_u_;

    void finalize_extremum(long t_new);
};

// Ratio estimator (mean stretch heights - 2*Gamma) / (mean lengths) with
// Gamma = 2J; K stretch pairs per replica, error bars across replicas.
Estimate stretch_max_energy(const DisorderLaw& law, double J, std::size_t K,
                            int replicas, std::uint64_t master_seed, int threads = 0);

// Per-replica moment summary used by the CLI and the Donsker-scaling checks.
struct StretchMoments {
    double mean_height_desc = 0.0, mean_height_asc = 0.0;
    double mean_length_desc = 0.0, mean_length_asc = 0.0;
    std::size_t pairs = 0;
};
StretchMoments collect_stretch_moments(const DisorderLaw& law, double gamma,
                                       std::size_t K, SplitMix64& g,
                                       std::vector<StretchSample>* samples = nullptr);

} // namespace rfic
