// rfic: estimators and constants for the strongly coupled random field Ising
// chain. Subcommands mirror the library modules; every run is reproducible
// from --seed alone.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rfic/disorder.hpp"
#include "rfic/extrema.hpp"
#include "rfic/harness.hpp"
#include "rfic/maxenergy.hpp"
#include "rfic/renewal.hpp"
#include "rfic/transfer.hpp"

namespace {

using nlohmann::ordered_json;

// Counts accept scientific notation ("1e7"); must land on a positive integer.
std::size_t parse_count(const std::string& s, const std::string& flag) {
    double v = 0.0;
    try {
        std::size_t pos = 0;
        v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected a number, got '" + s + "'");
    }
    if (!(v >= 1.0) || v != std::floor(v) || v > 9e18) {
        throw CLI::ValidationError(flag, "expected a positive integer, got '" + s + "'");
    }
    return static_cast<std::size_t>(v);
}

rfic::DisorderLaw parse_law(const std::string& spec) {
    return rfic::DisorderLaw::parse(spec); // throws std::invalid_argument
}

struct Out {
    std::string path;   // empty = stdout
    std::ofstream file;

    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
        }
        return file;
    }
};

void emit_estimate(std::ostream& os, const std::string& format,
                   const std::string& name, const rfic::Estimate& e) {
    if (format == "json") {
        ordered_json j{{"quantity", name},
                       {"mean", e.mean},
                       {"stderr", e.stderr},
                       {"n_samples", e.n_samples},
                       {"seed", e.seed}};
        os << j.dump(2) << '\n';
    } else {
        os << "quantity,mean,stderr,n_samples,seed\n";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s,%.12g,%.12g,%zu,%llu\n", name.c_str(),
                      e.mean, e.stderr, e.n_samples,
                      static_cast<unsigned long long>(e.seed));
        os << buf;
    }
}

void human_line(const char* name, const rfic::Estimate& e) {
    std::fprintf(stderr, "%s = %.3f ± %.3f\n", name, e.mean, e.stderr);
}

int run_selftest(std::uint64_t seed) {
    using namespace rfic;
    const std::vector<DisorderLaw> laws{DisorderLaw::gaussian(1.0),
                                        DisorderLaw::laplace(1.0),
                                        DisorderLaw::rademacher(1.0)};
    const std::vector<double> Js{0.5, 1.0, 2.0};
    const BoundaryCondition bcs[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
    SplitMix64 master(seed);
    std::uint64_t stream = 0;
    std::size_t checked = 0;
    for (const auto& law : laws) {
        for (double J : Js) {
            for (std::size_t N = 1; N <= 16; ++N) {
                for (int inst = 0; inst < 8; ++inst) {
                    SplitMix64 g = master.split(stream++);
                    auto h = law.sample_increments(g, N);
                    for (const auto& bc : bcs) {
                        double lz = log_partition(h, J, bc).value;
                        double lz_bf = brute_force_log_partition(h, J, bc).value;
                        double denom = std::max(1.0, std::fabs(lz_bf));
                        if (std::fabs(lz - lz_bf) / denom > 1e-10) {
                            std::fprintf(stderr,
                                         "selftest: log-partition mismatch law=%s J=%g N=%zu\n",
                                         law.spec().c_str(), J, N);
                            return 1;
                        }
                        double me = max_energy(h, J, bc);
                        double me_bf = brute_force_max(h, J, bc).value;
                        if (std::fabs(me - me_bf) > 1e-12) {
                            std::fprintf(stderr,
                                         "selftest: max-energy mismatch law=%s J=%g N=%zu\n",
                                         law.spec().c_str(), J, N);
                            return 1;
                        }
                        ++checked;
                    }
                }
            }
        }
    }
    std::fprintf(stderr, "selftest: %zu oracle comparisons passed\n", checked);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random field Ising chain: estimators, constants, sweeps"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string law_spec = "gaussian:1";
    std::uint64_t seed = 0;
    int threads = 0;
    std::string format = "csv";
    std::string out_path;

    auto add_common = [&](CLI::App* sub, bool needs_law = true) {
        if (needs_law) {
            sub->add_option("--law", law_spec,
                            "disorder law: gaussian:s | rademacher:a | laplace:b | "
                            "uniform:a | logistic_sech");
        }
        sub->add_option("--seed", seed, "master seed (bit-exact reruns)");
        sub->add_option("--threads", threads, "worker thread cap, 0 = all cores");
        sub->add_option("--format", format, "output encoding")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output file (default stdout)");
    };

    // free-energy
    auto* fe = app.add_subcommand("free-energy", "transfer-matrix estimate of F(J)");
    double J = 1.0;
    std::string N_str = "1e7";
    int replicas = 32;
    fe->add_option("--J", J, "coupling, > 0")->required();
    fe->add_option("--N", N_str, "chain length per replica");
    fe->add_option("--replicas", replicas, "independent replicas");
    add_common(fe);

    // max-energy
    auto* me = app.add_subcommand("max-energy", "ground-state energy density M(J)");
    std::string estimator = "dp";
    std::string K_str = "2000";
    std::string burn_str;
    me->add_option("--J", J, "coupling, > 0")->required();
    me->add_option("--N", N_str, "chain length per replica (dp/ergodic)");
    me->add_option("--replicas", replicas, "independent replicas");
    me->add_option("--estimator", estimator, "dp | ergodic | stretch")
        ->check(CLI::IsMember({"dp", "ergodic", "stretch"}));
    me->add_option("--K", K_str, "stretch pairs per replica (stretch estimator)");
    me->add_option("--burn-in", burn_str, "ergodic burn-in, default 10*Gamma^2/theta^2");
    add_common(me);

    // extrema-stats
    auto* ex = app.add_subcommand("extrema-stats",
                                  "stretch samples and moments at resolution gamma");
    double gamma = 8.0;
    ex->add_option("--gamma", gamma, "record resolution, > 0")->required();
    ex->add_option("--K", K_str, "stretch pairs to collect");
    add_common(ex);

    // constants
    auto* consts = app.add_subcommand("constants", "expansion constants");
    consts->require_subcommand(1);
    auto* kh = consts->add_subcommand("kappa-hat", "ladder-height constant");
    std::string n_str = "100000";
    kh->add_option("--n", n_str, "ladder samples per direction");
    add_common(kh);
    auto* kt = consts->add_subcommand("kappa-tilde", "conditioned-walk constant");
    std::vector<double> gamma_list;
    std::string envs_str = "4000";
    kt->add_option("--gamma", gamma_list, "gamma values (comma separated)")
        ->required()
        ->delimiter(',');
    kt->add_option("--n-envs", envs_str, "environments per gamma");
    add_common(kt);

    // lindley-cdf
    auto* lc = app.add_subcommand("lindley-cdf",
                                  "renewal invariant CDF of the reduced chain edge");
    std::string edge = "left";
    double x_max = 40.0;
    std::string chains_str = "10000";
    lc->add_option("--edge", edge, "left | right")
        ->check(CLI::IsMember({"left", "right"}));
    lc->add_option("--x-max", x_max, "domain cutoff, > 0");
    lc->add_option("--chains", chains_str, "renewal chains to average");
    add_common(lc);

    // sweep
    auto* sw = app.add_subcommand("sweep", "full estimator sweep with kappa verdicts");
    std::vector<double> J_list;
    std::string ladder_str = "100000";
    sw->add_option("--J", J_list, "couplings, increasing (comma separated)")
        ->required()
        ->delimiter(',');
    sw->add_option("--N", N_str, "chain length per replica");
    sw->add_option("--replicas", replicas, "independent replicas");
    sw->add_option("--n-ladder", ladder_str, "ladder samples for kappa-hat");
    sw->add_option("--n-envs", envs_str, "environments for kappa-tilde");
    sw->add_option("--K", K_str, "stretch pairs per replica");
    sw->add_option("--out-dir", out_path, "directory for <law>_<hash>.{csv,json}");
    add_common(sw);

    // selftest
    auto* st = app.add_subcommand("selftest", "exact oracle grids (N <= 16)");
    st->add_option("--seed", seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (st->parsed()) return run_selftest(seed);

        rfic::DisorderLaw law = [&] {
            try {
                return parse_law(law_spec);
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "rfic: --law: %s\n", e.what());
                std::exit(2);
            }
        }();

        Out out;
        out.path = out_path;

        if (fe->parsed()) {
            if (!(J > 0.0)) {
                std::fprintf(stderr, "rfic: --J must be > 0\n");
                return 2;
            }
            std::size_t N = parse_count(N_str, "--N");
            auto est = rfic::free_energy_estimate(law, J, N, replicas, seed, threads);
            human_line("F", est);
            emit_estimate(out.stream(), format, "free_energy", est);
            return 0;
        }

        if (me->parsed()) {
            if (!(J > 0.0)) {
                std::fprintf(stderr, "rfic: --J must be > 0\n");
                return 2;
            }
            rfic::Estimate est;
            if (estimator == "dp") {
                std::size_t N = parse_count(N_str, "--N");
                est = rfic::dp_max_energy_estimate(law, J, N, replicas, seed, threads);
            } else if (estimator == "ergodic") {
                std::size_t N = parse_count(N_str, "--N");
                std::size_t burn = burn_str.empty() ? rfic::default_burn_in(law, J)
                                                    : parse_count(burn_str, "--burn-in");
                auto res = rfic::ergodic_max_energy(law, J, N, burn, replicas, seed, threads);
                if (res.burn_in_warning) {
                    std::fprintf(stderr, "warning: burn-in below 8*Gamma^2/theta^2\n");
                }
                est = res.estimate;
            } else {
                std::size_t K = parse_count(K_str, "--K");
                est = rfic::stretch_max_energy(law, J, K, replicas, seed, threads);
            }
            human_line("M", est);
            emit_estimate(out.stream(), format, "max_energy_" + estimator, est);
            return 0;
        }

        if (ex->parsed()) {
            if (!(gamma > 0.0)) {
                std::fprintf(stderr, "rfic: --gamma must be > 0\n");
                return 2;
            }
            std::size_t K = parse_count(K_str, "--K");
            rfic::SplitMix64 g(seed);
            std::vector<rfic::StretchSample> samples;
            auto mom = rfic::collect_stretch_moments(law, gamma, K, g, &samples);
            std::ostream& os = out.stream();
            if (format == "json") {
                ordered_json j;
                j["law"] = law.spec();
                j["gamma"] = gamma;
                j["seed"] = seed;
                j["moments"] = {{"mean_height_desc", mom.mean_height_desc},
                                {"mean_height_asc", mom.mean_height_asc},
                                {"mean_length_desc", mom.mean_length_desc},
                                {"mean_length_asc", mom.mean_length_asc},
                                {"pairs", mom.pairs}};
                j["samples"] = ordered_json::array();
                for (const auto& s : samples) {
                    j["samples"].push_back({{"descending", s.descending},
                                            {"height", s.height},
                                            {"length", s.length}});
                }
                os << j.dump(2) << '\n';
            } else {
                char buf[200];
                std::snprintf(buf, sizeof(buf),
                              "# moments mean_height_desc=%.12g mean_height_asc=%.12g "
                              "mean_length_desc=%.12g mean_length_asc=%.12g pairs=%zu\n",
                              mom.mean_height_desc, mom.mean_height_asc,
                              mom.mean_length_desc, mom.mean_length_asc, mom.pairs);
                os << buf << "descending,height,length\n";
                for (const auto& s : samples) {
                    os << (s.descending ? 1 : 0) << ',' << s.height << ',' << s.length
                       << '\n';
                }
            }
            return 0;
        }

        if (kh->parsed()) {
            std::size_t n = parse_count(n_str, "--n");
            auto res = rfic::kappa_hat(law, n, seed, threads);
            std::printf("# kappa-hat = %.3f ± %.3f\n", res.strict.mean, res.strict.stderr);
            std::ostream& os = out.stream();
            if (format == "json") {
                ordered_json j{{"law", law.spec()},
                               {"kappa_hat_strict",
                                {{"mean", res.strict.mean}, {"stderr", res.strict.stderr}}},
                               {"kappa_hat_weak",
                                {{"mean", res.weak.mean}, {"stderr", res.weak.stderr}}},
                               {"n_samples", n},
                               {"seed", seed}};
                os << j.dump(2) << '\n';
            } else {
                char buf[160];
                os << "quantity,mean,stderr\n";
                std::snprintf(buf, sizeof(buf), "kappa_hat_strict,%.12g,%.12g\n",
                              res.strict.mean, res.strict.stderr);
                os << buf;
                std::snprintf(buf, sizeof(buf), "kappa_hat_weak,%.12g,%.12g\n",
                              res.weak.mean, res.weak.stderr);
                os << buf;
            }
            return 0;
        }

        if (kt->parsed()) {
            std::size_t n_envs = parse_count(envs_str, "--n-envs");
            auto res = rfic::kappa_tilde(law, gamma_list, n_envs, seed, threads);
            std::ostream& os = out.stream();
            if (format == "json") {
                ordered_json j;
                j["law"] = law.spec();
                j["seed"] = seed;
                j["results"] = ordered_json::array();
                for (const auto& r : res) {
                    j["results"].push_back(
                        {{"gamma", r.gamma},
                         {"inner", {{"mean", r.inner.mean}, {"stderr", r.inner.stderr}}},
                         {"full", {{"mean", r.full.mean}, {"stderr", r.full.stderr}}},
                         {"spread_warning", r.spread_warning}});
                }
                os << j.dump(2) << '\n';
            } else {
                os << "gamma,inner_mean,inner_stderr,full_mean,full_stderr,spread_warning\n";
                for (const auto& r : res) {
                    char buf[200];
                    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.12g,%d\n",
                                  r.gamma, r.inner.mean, r.inner.stderr, r.full.mean,
                                  r.full.stderr, r.spread_warning ? 1 : 0);
                    os << buf;
                }
            }
            for (const auto& r : res) {
                std::fprintf(stderr, "kappa-tilde(gamma=%.3g) = %.3f ± %.3f\n", r.gamma,
                             r.inner.mean, r.inner.stderr);
            }
            return 0;
        }

        if (lc->parsed()) {
            if (!(x_max > 0.0)) {
                std::fprintf(stderr, "rfic: --x-max must be > 0\n");
                return 2;
            }
            std::size_t chains = parse_count(chains_str, "--chains");
            rfic::SplitMix64 g(seed);
            auto cdf = rfic::lindley_cdf_renewal(law, edge == "left", x_max, chains, g);
            auto fit = rfic::asymptote_fit(cdf, x_max / 2.0, 0.9 * x_max);
            std::ostream& os = out.stream();
            if (format == "json") {
                ordered_json j;
                j["law"] = law.spec();
                j["edge"] = edge;
                j["seed"] = seed;
                j["fit"] = {{"slope", fit.slope},
                            {"intercept", fit.intercept},
                            {"ratio", fit.ratio},
                            {"curvature_warning", fit.curvature_warning}};
                j["atoms"] = ordered_json::array();
                for (std::size_t i = 0; i < cdf.size(); ++i) {
                    j["atoms"].push_back({{"x", cdf.atom(i)}, {"F", cdf(cdf.atom(i))}});
                }
                os << j.dump(2) << '\n';
            } else {
                char buf[200];
                std::snprintf(buf, sizeof(buf),
                              "# fit slope=%.12g intercept=%.12g ratio=%.12g warn=%d\n",
                              fit.slope, fit.intercept, fit.ratio,
                              fit.curvature_warning ? 1 : 0);
                os << buf << "x,F\n";
                for (std::size_t i = 0; i < cdf.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", cdf.atom(i),
                                  cdf(cdf.atom(i)));
                    os << buf;
                }
            }
            if (fit.curvature_warning) {
                std::fprintf(stderr, "warning: fit window still curved; increase --x-max\n");
            }
            return 0;
        }

        if (sw->parsed()) {
            rfic::Budget budget;
            budget.N = parse_count(N_str, "--N");
            budget.replicas = replicas;
            budget.n_ladder = parse_count(ladder_str, "--n-ladder");
            budget.n_envs = parse_count(envs_str, "--n-envs");
            budget.K_stretch = parse_count(K_str, "--K");
            auto rep = rfic::run_sweep(law, J_list, budget, seed, threads);
            for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
            for (const auto& v : rep.verdicts) std::fprintf(stderr, "%s\n", v.c_str());
            if (!out_path.empty()) {
                std::string base = out_path + "/" + rfic::report_basename(rep);
                {
                    std::ofstream f(base + ".csv");
                    if (!f) throw std::runtime_error("cannot write " + base + ".csv");
                    rfic::emit_csv(rep, f);
                }
                {
                    std::ofstream f(base + ".json");
                    if (!f) throw std::runtime_error("cannot write " + base + ".json");
                    rfic::emit_json(rep, f);
                }
                std::fprintf(stderr, "wrote %s.{csv,json}\n", base.c_str());
            } else if (format == "json") {
                rfic::emit_json(rep, std::cout);
            } else {
                rfic::emit_csv(rep, std::cout);
            }
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "rfic: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "rfic: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rfic: runtime failure: %s\n", e.what());
        return 1;
    }
    return 0;
}
