#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rfic/disorder.hpp"
#include "rfic/estimate.hpp"
#include "rfic/renewal.hpp"

namespace rfic {

struct Budget {
    std::size_t N = 10000000;      // chain length per replica (F and M estimators)
    int replicas = 32;
    std::size_t n_ladder = 100000; // ladder samples per direction for kappa_hat
    std::size_t n_envs = 4000;     // environments per gamma for kappa_tilde
    std::size_t K_stretch = 2000;  // stretch pairs per replica
};

struct SweepRow {
    double J = 0.0;
    Estimate F_hat;
    Estimate M_dp;
    Estimate M_ergodic;
    Estimate M_stretch;
    // Derived, recomputed at emit time from the estimates above.
    double kappa_eff_F = 0.0;   // theta^2 / F - 2J
    double kappa_eff_M = 0.0;   // theta^2 / M_dp - 2J
    double diff_scaled = 0.0;   // (F - M_dp) (2J)^2 / theta^2
    bool coherent = false;      // three M estimates pairwise within 3 stderr
    bool ordered = false;       // F >= M_dp - 3 stderr
};

struct ExpansionReport {
    std::string law_spec;
    std::uint64_t master_seed = 0;
    Budget budget;
    double theta2 = 0.0;
    std::vector<SweepRow> rows;
    KappaHat kappa_hat;
    std::vector<KappaTildeResult> kappa_tilde; // stability ladder, last = 2*max(J)
    double kappa = 0.0;        // kappa_hat.strict - kappa_tilde(inner, largest gamma)
    double kappa_stderr = 0.0;
    std::vector<std::string> verdicts;
    std::vector<std::string> warnings;
};

// Deterministic given (law, J_list, budget, master_seed).
ExpansionReport run_sweep(const DisorderLaw& law, const std::vector<double>& J_list,
                          const Budget& budget, std::uint64_t master_seed,
                          int threads = 0);

void emit_csv(const ExpansionReport& r, std::ostream& os);
void emit_json(const ExpansionReport& r, std::ostream& os);
void emit_plotdata(const ExpansionReport& r, std::ostream& os);

// Stable short hash of (law, J_list, budget, seed) used in output file names.
std::string sweep_hash(const ExpansionReport& r);
std::string report_basename(const ExpansionReport& r); // "<law>_<hash>"

} // namespace rfic
