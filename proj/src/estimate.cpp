#include "rfic/estimate.hpp"

#include <atomic>
#include <thread>

namespace rfic {

Estimate aggregate(const std::vector<double>& values, std::uint64_t seed) {
    Estimate e;
    e.seed = seed;
    e.n_samples = values.size();
    if (values.empty()) return e;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            double d = v - e.mean;
            ss += d * d;
        }
        double var = ss / static_cast<double>(values.size() - 1);
        e.stderr = std::sqrt(var / static_cast<double>(values.size()));
    }
    return e;
}

std::vector<double> parallel_replicas(int replicas, int threads,
                                      const std::function<double(int)>& fn) {
    std::vector<double> out(static_cast<std::size_t>(replicas), 0.0);
    if (replicas <= 0) return out;
    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = threads > 0 ? threads : (hw > 0 ? static_cast<int>(hw) : 1);
    n_threads = std::min(n_threads, replicas);
    if (n_threads <= 1) {
        for (int i = 0; i < replicas; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= replicas) return;
                out[static_cast<std::size_t>(i)] = fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

} // namespace rfic
