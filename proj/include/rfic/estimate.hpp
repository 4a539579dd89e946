#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace rfic {

// Universal statistical output: replica mean with between-replica stderr.
struct Estimate {
    double mean = 0.0;
    double stderr = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;

    // Combined standard error of the difference of two independent estimates.
    static double combined_stderr(const Estimate& a, const Estimate& b) {
        return std::sqrt(a.stderr * a.stderr + b.stderr * b.stderr);
    }
};

// Mean and between-sample stderr of a set of replica values.
Estimate aggregate(const std::vector<double>& values, std::uint64_t seed);

// Runs fn(replica_index) for indices [0, replicas) on up to `threads` worker
// threads (0 = hardware concurrency) and returns the values in replica order,
// so the reduction is deterministic regardless of thread count.
std::vector<double> parallel_replicas(int replicas, int threads,
                                      const std::function<double(int)>& fn);

} // namespace rfic
