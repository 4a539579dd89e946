#include "rfic/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfic {

namespace {

void check_inputs(std::size_t n, double J) {
    if (n == 0) throw std::invalid_argument("log_partition: N must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("log_partition: J must be > 0");
}

std::size_t bc_index(int spin) {
    if (spin == +1) return 0;
    if (spin == -1) return 1;
    throw std::invalid_argument("boundary spin must be +1 or -1");
}

} // namespace

TransferMatrix TransferMatrix::step(double h, double J) {
    TransferMatrix m;
    m.a = std::exp(h);
    m.b = std::exp(-2.0 * J + h);
    m.c = std::exp(-2.0 * J - h);
    m.d = std::exp(-h);
    m.log_scale = 0.0;
    m.renormalize();
    return m;
}

void TransferMatrix::renormalize() {
    double mx = std::max(std::max(a, b), std::max(c, d));
    a /= mx;
    b /= mx;
    c /= mx;
    d /= mx;
    log_scale += std::log(mx);
}

void TransferMatrix::multiply_right(const TransferMatrix& m) {
    double na = a * m.a + b * m.c;
    double nb = a * m.b + b * m.d;
    double nc = c * m.a + d * m.c;
    double nd = c * m.b + d * m.d;
    a = na;
    b = nb;
    c = nc;
    d = nd;
    log_scale += m.log_scale;
    renormalize();
}

LogPartition log_partition(std::span<const double> h, double J, BoundaryCondition bc) {
    check_inputs(h.size(), J);
    // Complete product including the left-most Q_J, so the finite-N value is
    // exactly log Z.
    TransferMatrix p;
    p.a = 1.0;
    p.b = std::exp(-2.0 * J);
    p.c = p.b;
    p.d = 1.0;
    for (double x : h) p.multiply_right(TransferMatrix::step(x, J));
    const double entries[2][2] = {{p.a, p.b}, {p.c, p.d}};
    double coeff = entries[bc_index(bc.g)][bc_index(bc.d)];
    LogPartition out;
    out.value = std::log(coeff) + p.log_scale;
    out.N = h.size();
    out.J = J;
    out.bc = bc;
    return out;
}

double config_energy_spins(std::span<const int> spins, std::span<const double> h,
                           double J, BoundaryCondition bc) {
    double e = 0.0;
    int prev = bc.g;
    for (std::size_t i = 0; i < spins.size(); ++i) {
        if (spins[i] != prev) e -= 2.0 * J;
        e += h[i] * spins[i];
        prev = spins[i];
    }
    if (prev != bc.d) e -= 2.0 * J;
    return e;
}

LogPartition brute_force_log_partition(std::span<const double> h, double J,
                                       BoundaryCondition bc) {
    check_inputs(h.size(), J);
    if (h.size() > 20) {
        throw std::invalid_argument("brute_force_log_partition: N must be <= 20");
    }
    const std::size_t n = h.size();
    std::vector<double> energies;
    energies.reserve(std::size_t{1} << n);
    std::vector<int> spins(n);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        // Bit (n-1-i) holds site i+1, so mask order is lexicographic with
        // all-plus first.
        for (std::size_t i = 0; i < n; ++i) {
            spins[i] = (mask >> (n - 1 - i)) & 1u ? -1 : +1;
        }
        energies.push_back(config_energy_spins(spins, h, J, bc));
    }
    double mx = *std::max_element(energies.begin(), energies.end());
    double s = 0.0;
    for (double e : energies) s += std::exp(e - mx);
    LogPartition out;
    out.value = mx + std::log(s);
    out.N = n;
    out.J = J;
    out.bc = bc;
    return out;
}

Estimate free_energy_estimate(const DisorderLaw& law, double J, std::size_t N,
                              int replicas, std::uint64_t master_seed, int threads,
                              BoundaryCondition bc) {
    check_inputs(N, J);
    if (replicas < 1) throw std::invalid_argument("free_energy_estimate: replicas >= 1");
    SplitMix64 master(master_seed);
    const double off = std::exp(-2.0 * J);
    auto one = [&](int r) {
        SplitMix64 g = master.split(static_cast<std::uint64_t>(r));
        // Fused T_h Q_J step, renormalized once per iteration.
        double a = 1.0, b = off, c = off, d = 1.0, log_scale = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double eh = std::exp(law.sample(g));
            double ei = 1.0 / eh;
            double na = a * eh + b * off * ei;
            double nb = a * off * eh + b * ei;
            double nc = c * eh + d * off * ei;
            double nd = c * off * eh + d * ei;
            double mx = std::max(std::max(na, nb), std::max(nc, nd));
            a = na / mx;
            b = nb / mx;
            c = nc / mx;
            d = nd / mx;
            log_scale += std::log(mx);
        }
        const double entries[2][2] = {{a, b}, {c, d}};
        double coeff = entries[bc.g == 1 ? 0 : 1][bc.d == 1 ? 0 : 1];
        return (std::log(coeff) + log_scale) / static_cast<double>(N);
    };
    auto values = parallel_replicas(replicas, threads, one);
    return aggregate(values, master_seed);
}

} // namespace rfic
