#include "rfic/extrema.hpp"

#include <cmath>
#include <stdexcept>

namespace rfic {

StreamingDecomposer::StreamingDecomposer(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    buffer_.push_back(0.0); // S_0
    run_ext_ = 0.0;
}

double StreamingDecomposer::value(long i) const {
    return buffer_[static_cast<std::size_t>(i - win_start_)];
}

void StreamingDecomposer::drop_before(long i) {
    if (i <= win_start_) return;
    if (i > n_) i = n_;
    buffer_.erase(buffer_.begin(), buffer_.begin() + (i - win_start_));
    win_start_ = i;
}

void StreamingDecomposer::finalize_extremum(long t_new) {
    // Arg-extremum scan over [last_t_, t_new]; first occurrence gives u,
    // last occurrence gives u^+. Ties are exact floating comparisons, per the
    // definitions (lattice laws genuinely produce them).
    long first = last_t_;
    long last = last_t_;
    double best = value(last_t_);
    for (long i = last_t_ + 1; i <= t_new; ++i) {
        double v = value(i);
        bool better = seeking_decrease_ ? (v > best) : (v < best);
        if (better) {
            best = v;
            first = i;
            last = i;
        } else if (v == best) {
            last = i;
        }
    }
    t_.push_back(t_new);
    u_.push_back(first);
    u_plus_.push_back(last);
    s_u_.push_back(best);
    last_t_ = t_new;
    seeking_decrease_ = !seeking_decrease_;
    run_ext_ = value(t_new);
    // Re-scan the tail [u^+, t_new]: the running extremum of the new phase may
    // already live there.
    for (long i = t_new; i <= n_; ++i) {
        double v = value(i);
        if (seeking_decrease_ ? (v > run_ext_) : (v < run_ext_)) run_ext_ = v;
    }
}

void StreamingDecomposer::push(double h) {
    double v = buffer_.back() + h;
    buffer_.push_back(v);
    ++n_;
    if (seeking_decrease_) {
        if (v > run_ext_) run_ext_ = v;
        if (run_ext_ - v >= gamma_) finalize_extremum(n_);
    } else {
        if (v < run_ext_) run_ext_ = v;
        if (v - run_ext_ >= gamma_) finalize_extremum(n_);
    }
}

GammaDecomposition StreamingDecomposer::snapshot() const {
    GammaDecomposition d;
    d.gamma = gamma_;
    d.t = t_;
    d.u = u_;
    d.u_plus = u_plus_;
    d.s_u = s_u_;
    d.complete = t_.size() >= 2;
    return d;
}

GammaDecomposition decompose(std::span<const double> S, double gamma) {
    StreamingDecomposer sd(gamma);
    for (std::size_t i = 1; i < S.size(); ++i) sd.push(S[i] - S[i - 1]);
    return sd.snapshot();
}

std::vector<StretchSample> stretch_samples(const GammaDecomposition& d,
                                           std::span<const double> S) {
    if (!d.complete) {
        throw std::invalid_argument("stretch_samples: decomposition has no full period");
    }
    std::vector<StretchSample> out;
    for (std::size_t k = 0; k + 1 < d.u.size(); ++k) {
        StretchSample s;
        s.descending = (k % 2 == 0); // from a gamma-maximum down to a minimum
        s.height = std::fabs(S[static_cast<std::size_t>(d.u[k + 1])] -
                             S[static_cast<std::size_t>(d.u[k])]);
        s.length = d.u[k + 1] - d.u[k];
        out.push_back(s);
    }
    return out;
}

Environment environment_around_minimum(std::span<const double> S,
                                       const GammaDecomposition& d, std::size_t k) {
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("environment_around_minimum: k must be even and >= 2");
    }
    if (d.u.size() < k + 1 || d.u_plus.size() < k + 1) {
        throw std::invalid_argument(
            "environment_around_minimum: stretches k-1 and k not fully contained");
    }
    long uk = d.u[k - 1];
    long lo = d.u[k - 2];
    long hi = d.u_plus[k];
    Environment env;
    env.offset_lo = lo - uk;
    env.offset_hi = hi - uk;
    double center = S[static_cast<std::size_t>(uk)];
    env.values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) {
        env.values.push_back(S[static_cast<std::size_t>(i)] - center);
    }
    double half = d.gamma / 2.0;
    env.tau_minus = env.offset_lo;
    for (long n = env.offset_lo; n <= 0; ++n) {
        if (env.at(n) >= half) env.tau_minus = n;
    }
    env.tau_plus = env.offset_hi;
    for (long n = env.offset_hi; n >= 0; --n) {
        if (env.at(n) >= half) env.tau_plus = n;
    }
    return env;
}

StretchMoments collect_stretch_moments(const DisorderLaw& law, double gamma,
                                       std::size_t K, SplitMix64& g,
                                       std::vector<StretchSample>* samples) {
    StreamingDecomposer sd(gamma);
    StretchMoments m;
    std::size_t consumed = 0; // stretches already accounted for
    double sum_h_d = 0.0, sum_h_a = 0.0;
    double sum_l_d = 0.0, sum_l_a = 0.0;
    // One pair per period: stretch 2p-1 (descending) and 2p (ascending),
    // i.e. u_{2p-1}->u_{2p} and u_{2p}->u_{2p+1}.
    while (m.pairs < K) {
        sd.push(law.sample(g));
        while (sd.extrema_count() >= consumed + 2 && m.pairs < K) {
            std::size_t k = consumed; // 0-based left endpoint of the stretch
            double height = std::fabs(sd.s_u(k + 1) - sd.s_u(k));
            long length = sd.u(k + 1) - sd.u(k);
            bool descending = (k % 2 == 0);
            if (descending) {
                sum_h_d += height;
                sum_l_d += static_cast<double>(length);
            } else {
                sum_h_a += height;
                sum_l_a += static_cast<double>(length);
                ++m.pairs;
            }
            if (samples) samples->push_back({descending, height, length});
            ++consumed;
            sd.drop_before(sd.u(k + 1));
        }
    }
    double n = static_cast<double>(m.pairs);
    m.mean_height_desc = sum_h_d / n;
    m.mean_height_asc = sum_h_a / n;
    m.mean_length_desc = sum_l_d / n;
    m.mean_length_asc = sum_l_a / n;
    return m;
}

Estimate stretch_max_energy(const DisorderLaw& law, double J, std::size_t K,
                            int replicas, std::uint64_t master_seed, int threads) {
    if (!(J > 0.0)) throw std::invalid_argument("stretch_max_energy: J must be > 0");
    if (replicas < 1) throw std::invalid_argument("stretch_max_energy: replicas >= 1");
    double gamma = 2.0 * J;
    SplitMix64 master(master_seed);
    auto one = [&](int r) {
        SplitMix64 g = master.split(static_cast<std::uint64_t>(r));
        StretchMoments m = collect_stretch_moments(law, gamma, K, g);
        double num = m.mean_height_desc + m.mean_height_asc - 2.0 * gamma;
        double den = m.mean_length_desc + m.mean_length_asc;
        return num / den;
    };
    auto values = parallel_replicas(replicas, threads, one);
    return aggregate(values, master_seed);
}

} // namespace rfic
