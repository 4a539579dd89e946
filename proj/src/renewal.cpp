#include "rfic/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rfic/extrema.hpp"

namespace rfic {

namespace {

// One first-passage record of a fresh walk. Returns nullopt if the epoch cap
// is hit; callers redraw. The cap conditions on {epoch <= cap}, whose
// probability defect is O(cap^{-1/2}) and whose effect on the height moments
// is far below every statistical tolerance in use.
std::optional<LadderSample> one_ladder(const DisorderLaw& law, const LadderOptions& opt,
                                       SplitMix64& g) {
    double s = 0.0;
    for (long n = 1; n <= opt.max_epoch; ++n) {
        s += law.sample(g);
        bool crossed;
        if (opt.ascending) {
            crossed = opt.strict ? (s > 0.0) : (s >= 0.0);
        } else {
            crossed = opt.strict ? (s < 0.0) : (s <= 0.0);
        }
        if (crossed) {
            return LadderSample{opt.ascending ? s : -s, n};
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<LadderSample> ladder_samples(const DisorderLaw& law, LadderOptions opt,
                                         std::size_t n, SplitMix64& g) {
    std::vector<LadderSample> out;
    out.reserve(n);
    while (out.size() < n) {
        if (auto s = one_ladder(law, opt, g)) out.push_back(*s);
    }
    return out;
}

std::vector<DualLadderSample> dual_ladder_samples(const DisorderLaw& law, bool ascending,
                                                  long max_epoch, std::size_t n,
                                                  SplitMix64& g) {
    std::vector<DualLadderSample> out;
    out.reserve(n);
    double sign = ascending ? 1.0 : -1.0;
    while (out.size() < n) {
        double s = 0.0;
        DualLadderSample d;
        bool weak_found = false, strict_found = false;
        for (long m = 1; m <= max_epoch; ++m) {
            s += sign * law.sample(g);
            if (!weak_found && s >= 0.0) {
                d.weak = LadderSample{s, m};
                weak_found = true;
            }
            if (s > 0.0) {
                d.strict = LadderSample{s, m};
                strict_found = true;
                break;
            }
        }
        if (strict_found) out.push_back(d); // capped attempts are redrawn whole
    }
    return out;
}

Estimate ladder_ratio(const std::vector<LadderSample>& samples, std::uint64_t seed) {
    if (samples.empty()) throw std::invalid_argument("ladder_ratio: empty sample");
    double n = static_cast<double>(samples.size());
    double mh = 0.0, mh2 = 0.0;
    for (const auto& s : samples) {
        mh += s.height;
        mh2 += s.height * s.height;
    }
    mh /= n;
    mh2 /= n;
    double r = mh2 / mh;
    // Delta method for A/B with A = mean(H^2), B = mean(H).
    double vA = 0.0, vB = 0.0, cAB = 0.0;
    for (const auto& s : samples) {
        double da = s.height * s.height - mh2;
        double db = s.height - mh;
        vA += da * da;
        vB += db * db;
        cAB += da * db;
    }
    vA /= n - 1.0;
    vB /= n - 1.0;
    cAB /= n - 1.0;
    double var_r = (vA - 2.0 * r * cAB + r * r * vB) / (mh * mh) / n;
    Estimate e;
    e.mean = r;
    e.stderr = var_r > 0.0 ? std::sqrt(var_r) : 0.0;
    e.n_samples = samples.size();
    e.seed = seed;
    return e;
}

KappaHat kappa_hat(const DisorderLaw& law, std::size_t n_samples,
                   std::uint64_t master_seed, int threads) {
    if (n_samples == 0) throw std::invalid_argument("kappa_hat: n_samples >= 1");
    SplitMix64 master(master_seed);
    LadderOptions defaults;
    // One pass per direction yields both the strict and the weak heights.
    auto collect = [&](bool ascending, std::uint64_t tag) {
        const int chunks = 16;
        std::size_t per = (n_samples + chunks - 1) / chunks;
        std::vector<std::vector<DualLadderSample>> parts(chunks);
        parallel_replicas(chunks, threads, [&](int c) {
            SplitMix64 g = master.split(tag * 64 + static_cast<std::uint64_t>(c));
            std::size_t done = std::min(n_samples, per * static_cast<std::size_t>(c));
            std::size_t want = std::min(per, n_samples - done);
            parts[static_cast<std::size_t>(c)] =
                dual_ladder_samples(law, ascending, defaults.max_epoch, want, g);
            return 0.0;
        });
        std::vector<LadderSample> strict, weak;
        strict.reserve(n_samples);
        weak.reserve(n_samples);
        for (const auto& p : parts) {
            for (const auto& d : p) {
                strict.push_back(d.strict);
                weak.push_back(d.weak);
            }
        }
        return std::pair(std::move(strict), std::move(weak));
    };
    auto [sa, wa] = collect(true, 0);
    auto [sd, wd] = collect(false, 1);
    auto half_sum = [&](const std::vector<LadderSample>& a,
                        const std::vector<LadderSample>& b) {
        Estimate ra = ladder_ratio(a, master_seed);
        Estimate rb = ladder_ratio(b, master_seed);
        Estimate e;
        e.mean = 0.5 * (ra.mean + rb.mean);
        e.stderr = 0.5 * std::sqrt(ra.stderr * ra.stderr + rb.stderr * rb.stderr);
        e.n_samples = a.size() + b.size();
        e.seed = master_seed;
        return e;
    };
    KappaHat out;
    out.strict = half_sum(sa, sd);
    out.weak = half_sum(wa, wd);
    return out;
}

namespace {

struct EnvSums {
    double inner = 0.0; // log sum over (tau^-, tau^+) exclusive
    double full = 0.0;  // log sum over [u_{-1}, u_{+1}^+]
};

// Environments around successive gamma-minima of one streamed walk.
// Minima are the extrema with odd 0-based index; the environment around
// minimum j spans [u_{j-1}, u^+_{j+1}] and is available once extremum j+1 is
// finalized. Consecutive environments share no stretch, so the per-sample
// values are i.i.d.
class EnvironmentCollector {
public:
    EnvironmentCollector(const DisorderLaw& law, double gamma, SplitMix64 g)
        : law_(law), sd_(gamma), g_(g), gamma_(gamma) {}

    EnvSums next() {
        while (sd_.extrema_count() < next_min_ + 2) sd_.push(law_.sample(g_));
        std::size_t j = next_min_;
        next_min_ += 2;
        EnvSums sums = compute(j);
        sd_.drop_before(sd_.u(j + 1));
        return sums;
    }

private:
    EnvSums compute(std::size_t j) {
        long uk = sd_.u(j);
        long lo = sd_.u(j - 1);
        long hi = sd_.u_plus(j + 1);
        double center = sd_.value(uk);
        double half = gamma_ / 2.0;
        long tau_minus = lo - uk;
        for (long n = lo; n <= uk; ++n) {
            if (sd_.value(n) - center >= half) tau_minus = n - uk;
        }
        long tau_plus = hi - uk;
        for (long n = hi; n >= uk; --n) {
            if (sd_.value(n) - center >= half) tau_plus = n - uk;
        }
        double inner = 0.0, full = 0.0;
        for (long n = lo; n <= hi; ++n) {
            double term = std::exp(-2.0 * (sd_.value(n) - center));
            full += term;
            long off = n - uk;
            if (off > tau_minus && off < tau_plus) inner += term;
        }
        return {std::log(inner), std::log(full)};
    }

    const DisorderLaw& law_;
    StreamingDecomposer sd_;
    SplitMix64 g_;
    double gamma_;
    std::size_t next_min_ = 1; // 0-based index of the next unused minimum
};

Estimate from_values(const std::vector<double>& v, std::uint64_t seed) {
    Estimate e = aggregate(v, seed);
    return e;
}

} // namespace

std::vector<KappaTildeResult> kappa_tilde(const DisorderLaw& law,
                                          const std::vector<double>& gammas,
                                          std::size_t n_envs,
                                          std::uint64_t master_seed, int threads) {
    if (n_envs == 0) throw std::invalid_argument("kappa_tilde: n_envs >= 1");
    double min_gamma = 4.0 * std::sqrt(law.variance());
    std::vector<KappaTildeResult> out;
    SplitMix64 master(master_seed);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        double gamma = gammas[gi];
        if (gamma < min_gamma) {
            throw std::invalid_argument("kappa_tilde: gamma below 4*sqrt(variance)");
        }
        const int workers = 16;
        std::size_t per = (n_envs + workers - 1) / workers;
        std::vector<std::vector<EnvSums>> parts(workers);
        parallel_replicas(workers, threads, [&](int w) {
            SplitMix64 g = master.split(gi * 1024 + static_cast<std::uint64_t>(w));
            EnvironmentCollector coll(law, gamma, g);
            std::size_t want =
                std::min(per, n_envs - std::min(n_envs, per * static_cast<std::size_t>(w)));
            auto& dst = parts[static_cast<std::size_t>(w)];
            dst.reserve(want);
            for (std::size_t i = 0; i < want; ++i) dst.push_back(coll.next());
            return 0.0;
        });
        std::vector<double> inner, full;
        inner.reserve(n_envs);
        full.reserve(n_envs);
        for (const auto& p : parts) {
            for (const auto& s : p) {
                inner.push_back(s.inner);
                full.push_back(s.full);
            }
        }
        KappaTildeResult r;
        r.gamma = gamma;
        r.inner = from_values(inner, master_seed);
        r.full = from_values(full, master_seed);
        r.spread_warning = std::fabs(r.inner.mean - r.full.mean) >
                           Estimate::combined_stderr(r.inner, r.full);
        out.push_back(r);
    }
    return out;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.size() != weights.size()) {
        throw std::invalid_argument("EmpiricalCdf: atoms/weights size mismatch");
    }
    std::vector<std::size_t> idx(atoms.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    xs_.reserve(atoms.size());
    cum_.reserve(atoms.size());
    double acc = 0.0;
    for (std::size_t i : idx) {
        acc += weights[i];
        if (!xs_.empty() && xs_.back() == atoms[i]) {
            cum_.back() = acc;
        } else {
            xs_.push_back(atoms[i]);
            cum_.push_back(acc);
        }
    }
}

EmpiricalCdf EmpiricalCdf::point_mass(double x) { return EmpiricalCdf({x}, {1.0}); }

double EmpiricalCdf::operator()(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0.0;
    return scale_ * cum_[static_cast<std::size_t>(it - xs_.begin()) - 1];
}

EmpiricalCdf lindley_cdf_renewal(const DisorderLaw& law, bool left_edge,
                                 double x_max, std::size_t n_chains, SplitMix64& g) {
    if (!(x_max > 0.0) || n_chains == 0) {
        throw std::invalid_argument("lindley_cdf_renewal: bad arguments");
    }
    std::vector<double> atoms;
    std::vector<double> weights;
    double w = 1.0 / static_cast<double>(n_chains);
    // Strict ascending ladders of the T-walk for the left edge; the right
    // edge is driven by -z, i.e. descending ladders of the same walk.
    LadderOptions opt{left_edge, true, 1000000L};
    for (std::size_t c = 0; c < n_chains; ++c) {
        double level = 0.0;
        atoms.push_back(0.0); // k = 0 term
        weights.push_back(w);
        while (level <= x_max) {
            std::optional<LadderSample> s;
            while (!s) s = one_ladder(law, opt, g);
            double hz = 2.0 * s->height; // T-units: z = 2h
            level += hz;
            if (level > x_max) break;
            atoms.push_back(level);
            weights.push_back(w);
        }
    }
    EmpiricalCdf cdf(std::move(atoms), std::move(weights));
    LineFit fit = asymptote_fit(cdf, x_max / 2.0, 0.9 * x_max);
    if (!(fit.slope > 0.0)) throw std::runtime_error("lindley_cdf_renewal: degenerate fit");
    cdf.rescale(1.0 / fit.slope);
    return cdf;
}

LineFit asymptote_fit(const EmpiricalCdf& cdf, double x_lo, double x_hi,
                      int grid_points) {
    if (!(x_hi > x_lo) || grid_points < 2) {
        throw std::invalid_argument("asymptote_fit: bad window");
    }
    std::vector<double> xs, ys;
    // Prefer the staircase's own jump points, centered on the step: a uniform
    // grid on a coarse lattice cdf biases the line toward the grid phase.
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        double x = cdf.atom(i);
        if (x < x_lo || x > x_hi) continue;
        xs.push_back(x);
        ys.push_back(cdf(x) - 0.5 * cdf.weight(i));
    }
    if (xs.size() < 4) {
        xs.clear();
        ys.clear();
        for (int i = 0; i < grid_points; ++i) {
            double x = x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                                  (static_cast<double>(grid_points) - 1.0);
            xs.push_back(x);
            ys.push_back(cdf(x));
        }
    }
    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    LineFit fit;
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.ratio = fit.intercept / fit.slope;
    double range = ys.back() - ys.front();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = std::fabs(ys[i] - fit.slope * xs[i] - fit.intercept);
        fit.max_residual = std::max(fit.max_residual, r);
    }
    fit.curvature_warning = range > 0.0 && fit.max_residual > 0.02 * range;
    return fit;
}

PatchedMeasure patched_measure(const EmpiricalCdf& F_left, const EmpiricalCdf& F_right,
                               double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("patched_measure: gamma > 0");
    double C = F_left(gamma) + F_right(gamma);
    if (!(C > 0.0)) throw std::invalid_argument("patched_measure: C_Gamma <= 0");
    std::vector<double> atoms;
    std::vector<double> weights;
    for (std::size_t i = 0; i < F_left.size(); ++i) {
        double y = F_left.atom(i);
        if (y > gamma) break;
        atoms.push_back(y - gamma);
        weights.push_back(F_left.weight(i) / C);
    }
    for (std::size_t i = 0; i < F_right.size(); ++i) {
        double y = F_right.atom(i);
        if (y >= gamma) break;
        atoms.push_back(gamma - y);
        weights.push_back(F_right.weight(i) / C);
    }
    PatchedMeasure pm;
    pm.gamma = gamma;
    pm.C = C;
    pm.cdf = EmpiricalCdf(std::move(atoms), std::move(weights));
    return pm;
}

double m_gamma_functional(const EmpiricalCdf& nu, const DisorderLaw& law, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("m_gamma_functional: gamma >= 0");
    // integral F_nu(z - Gamma) F_zeta(-z) dz
    //   = sum_i w_i * integral_{x_i + Gamma}^{inf} F_zeta(-z) dz
    //   = sum_i w_i * E[(-z - x_i - Gamma)^+].
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        acc += nu.weight(i) * law.z_mean_excess(nu.atom(i) + gamma);
    }
    return acc;
}

double kappa_hat_1(const EmpiricalCdf& F_left, const DisorderLaw& law) {
    return 0.5 * m_gamma_functional(F_left, law, 0.0);
}

double wasserstein_1(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    if (std::fabs(a.total_mass() - b.total_mass()) > 1e-9) {
        throw std::invalid_argument("wasserstein_1: inputs must have equal total mass");
    }
    // |F_a - F_b| is piecewise constant between merged atoms.
    std::vector<double> pts;
    pts.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) pts.push_back(a.atom(i));
    for (std::size_t i = 0; i < b.size(); ++i) pts.push_back(b.atom(i));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        acc += std::fabs(a(pts[i]) - b(pts[i])) * (pts[i + 1] - pts[i]);
    }
    return acc;
}

} // namespace rfic
