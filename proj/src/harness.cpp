#include "rfic/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "rfic/extrema.hpp"
#include "rfic/maxenergy.hpp"
#include "rfic/transfer.hpp"

namespace rfic {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

bool within(const Estimate& a, const Estimate& b, double k_sigma) {
    double se = Estimate::combined_stderr(a, b);
    return std::fabs(a.mean - b.mean) <= k_sigma * std::max(se, 1e-300);
}

} // namespace

ExpansionReport run_sweep(const DisorderLaw& law, const std::vector<double>& J_list,
                          const Budget& budget, std::uint64_t master_seed,
                          int threads) {
    if (J_list.size() < 2) throw std::invalid_argument("run_sweep: need >= 2 J values");
    if (!std::is_sorted(J_list.begin(), J_list.end())) {
        throw std::invalid_argument("run_sweep: J_list must be increasing");
    }
    ExpansionReport rep;
    rep.law_spec = law.spec();
    rep.master_seed = master_seed;
    rep.budget = budget;
    rep.theta2 = law.variance();

    SplitMix64 master(master_seed);
    for (std::size_t i = 0; i < J_list.size(); ++i) {
        double J = J_list[i];
        SweepRow row;
        row.J = J;
        std::uint64_t base = static_cast<std::uint64_t>(i) * 8;
        row.F_hat = free_energy_estimate(law, J, budget.N, budget.replicas,
                                         master.split(base + 0).seed(), threads);
        row.M_dp = dp_max_energy_estimate(law, J, budget.N, budget.replicas,
                                          master.split(base + 1).seed(), threads);
        auto erg = ergodic_max_energy(law, J, budget.N, default_burn_in(law, J),
                                      budget.replicas, master.split(base + 2).seed(),
                                      threads);
        row.M_ergodic = erg.estimate;
        if (erg.burn_in_warning) {
            rep.warnings.push_back("J=" + fmt(J) + ": ergodic burn-in below 8*Gamma^2/theta^2");
        }
        row.M_stretch = stretch_max_energy(law, J, budget.K_stretch, budget.replicas,
                                           master.split(base + 3).seed(), threads);
        double t2 = rep.theta2;
        row.kappa_eff_F = t2 / row.F_hat.mean - 2.0 * J;
        row.kappa_eff_M = t2 / row.M_dp.mean - 2.0 * J;
        row.diff_scaled = (row.F_hat.mean - row.M_dp.mean) * 4.0 * J * J / t2;
        row.coherent = within(row.M_dp, row.M_ergodic, 3.0) &&
                       within(row.M_dp, row.M_stretch, 3.0) &&
                       within(row.M_ergodic, row.M_stretch, 3.0);
        row.ordered = row.F_hat.mean >= row.M_dp.mean - 3.0 * row.M_dp.stderr;
        rep.rows.push_back(row);
    }

    rep.kappa_hat = kappa_hat(law, budget.n_ladder, master.split(4096).seed(), threads);
    double gamma_max = 2.0 * J_list.back();
    std::vector<double> gammas{0.75 * gamma_max, gamma_max};
    double floor_gamma = 4.0 * std::sqrt(law.variance());
    std::erase_if(gammas, [&](double g) { return g < floor_gamma; });
    if (gammas.empty()) gammas.push_back(floor_gamma);
    rep.kappa_tilde = kappa_tilde(law, gammas, budget.n_envs,
                                  master.split(4097).seed(), threads);
    const KappaTildeResult& kt = rep.kappa_tilde.back();
    if (kt.spread_warning) {
        rep.warnings.push_back("kappa_tilde: inner/full estimates differ beyond stderr at largest gamma");
    }
    rep.kappa = rep.kappa_hat.strict.mean - kt.inner.mean;
    rep.kappa_stderr = Estimate::combined_stderr(rep.kappa_hat.strict, kt.inner);

    for (const auto& row : rep.rows) {
        rep.verdicts.push_back("J=" + fmt(row.J) + " coherence " +
                               (row.coherent ? "PASS" : "FAIL"));
        rep.verdicts.push_back("J=" + fmt(row.J) + " ordering F>=M " +
                               (row.ordered ? "PASS" : "FAIL"));
    }
    const SweepRow& last = rep.rows.back();
    double resid = last.kappa_eff_F - rep.kappa;
    rep.verdicts.push_back(
        "kappa residual at J=" + fmt(last.J) + ": theta^2/F - 2J = " +
        fmt(last.kappa_eff_F) + " vs kappa_hat - kappa_tilde = " + fmt(rep.kappa) +
        " (diff " + fmt(resid) + ")");
    return rep;
}

void emit_csv(const ExpansionReport& r, std::ostream& os) {
    os << "# rfic-sweep-csv v1 law=" << r.law_spec << " seed=" << r.master_seed << "\n";
    os << "J,F_mean,F_stderr,Mdp_mean,Mdp_stderr,Merg_mean,Merg_stderr,"
          "Mstr_mean,Mstr_stderr,kappa_eff_F,kappa_eff_M,diff_scaled,coherent,ordered\n";
    for (const auto& row : r.rows) {
        os << fmt(row.J) << ',' << fmt(row.F_hat.mean) << ',' << fmt(row.F_hat.stderr)
           << ',' << fmt(row.M_dp.mean) << ',' << fmt(row.M_dp.stderr) << ','
           << fmt(row.M_ergodic.mean) << ',' << fmt(row.M_ergodic.stderr) << ','
           << fmt(row.M_stretch.mean) << ',' << fmt(row.M_stretch.stderr) << ','
           << fmt(row.kappa_eff_F) << ',' << fmt(row.kappa_eff_M) << ','
           << fmt(row.diff_scaled) << ',' << (row.coherent ? 1 : 0) << ','
           << (row.ordered ? 1 : 0) << "\n";
    }
}

namespace {

nlohmann::ordered_json estimate_json(const Estimate& e) {
    return {{"mean", e.mean},
            {"stderr", e.stderr},
            {"n_samples", e.n_samples},
            {"seed", e.seed}};
}

} // namespace

void emit_json(const ExpansionReport& r, std::ostream& os) {
    nlohmann::ordered_json j;
    j["schema"] = "rfic-sweep-json v1";
    j["law"] = r.law_spec;
    j["master_seed"] = r.master_seed;
    j["budget"] = {{"N", r.budget.N},
                   {"replicas", r.budget.replicas},
                   {"n_ladder", r.budget.n_ladder},
                   {"n_envs", r.budget.n_envs},
                   {"K_stretch", r.budget.K_stretch}};
    j["theta2"] = r.theta2;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        j["rows"].push_back({{"J", row.J},
                             {"F_hat", estimate_json(row.F_hat)},
                             {"M_dp", estimate_json(row.M_dp)},
                             {"M_ergodic", estimate_json(row.M_ergodic)},
                             {"M_stretch", estimate_json(row.M_stretch)},
                             {"kappa_eff_F", row.kappa_eff_F},
                             {"kappa_eff_M", row.kappa_eff_M},
                             {"diff_scaled", row.diff_scaled},
                             {"coherent", row.coherent},
                             {"ordered", row.ordered}});
    }
    j["kappa_hat"] = {{"strict", estimate_json(r.kappa_hat.strict)},
                      {"weak", estimate_json(r.kappa_hat.weak)}};
    j["kappa_tilde"] = nlohmann::ordered_json::array();
    for (const auto& kt : r.kappa_tilde) {
        j["kappa_tilde"].push_back({{"gamma", kt.gamma},
                                    {"inner", estimate_json(kt.inner)},
                                    {"full", estimate_json(kt.full)},
                                    {"spread_warning", kt.spread_warning}});
    }
    j["kappa"] = r.kappa;
    j["kappa_stderr"] = r.kappa_stderr;
    j["verdicts"] = r.verdicts;
    j["warnings"] = r.warnings;
    os << j.dump(2) << '\n';
}

void emit_plotdata(const ExpansionReport& r, std::ostream& os) {
    os << "series J value err\n";
    auto line = [&](const char* name, double J, double v, double e) {
        os << name << ' ' << fmt(J) << ' ' << fmt(v) << ' ' << fmt(e) << '\n';
    };
    for (const auto& row : r.rows) {
        line("F", row.J, row.F_hat.mean, row.F_hat.stderr);
        line("M_dp", row.J, row.M_dp.mean, row.M_dp.stderr);
        line("M_ergodic", row.J, row.M_ergodic.mean, row.M_ergodic.stderr);
        line("M_stretch", row.J, row.M_stretch.mean, row.M_stretch.stderr);
        line("kappa_eff_F", row.J, row.kappa_eff_F, 0.0);
        line("kappa_eff_M", row.J, row.kappa_eff_M, 0.0);
        line("diff_scaled", row.J, row.diff_scaled, 0.0);
    }
}

std::string sweep_hash(const ExpansionReport& r) {
    std::ostringstream key;
    key << r.law_spec << '|' << r.master_seed << '|' << r.budget.N << '|'
        << r.budget.replicas << '|' << r.budget.n_ladder << '|' << r.budget.n_envs
        << '|' << r.budget.K_stretch;
    for (const auto& row : r.rows) key << '|' << fmt(row.J);
    // FNV-1a, 64-bit.
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : key.str()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%08x", static_cast<unsigned>(h & 0xFFFFFFFFu));
    return std::string(buf);
}

std::string report_basename(const ExpansionReport& r) {
    std::string law = r.law_spec;
    std::replace(law.begin(), law.end(), ':', '-');
    return law + "_" + sweep_hash(r);
}

} // namespace rfic
