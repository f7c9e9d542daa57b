#include "kdm/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kdm {

EquilibriumSolution solve_closed_form(const MarketParams& params) {
    params.validate();

    const double n_total = static_cast<double>(params.n_rounds);
    const double m = static_cast<double>(params.n_makers);
    const double sv = params.sigma_v;
    const double su = params.sigma_u;
    // sqrt((M-2)/M) stays well conditioned for large M, unlike the chained
    // sqrt(M-2)/sqrt(M) products.
    const double root_ratio = std::sqrt((m - 2.0) / m);

    EquilibriumSolution eq;
    eq.params = params;
    eq.beta.resize(params.n_rounds);
    eq.sigma_z2.resize(params.n_rounds);
    eq.sigma_path.resize(params.n_rounds + 1);

    for (int n = 1; n <= params.n_rounds; ++n) {
        const double remaining = n_total - static_cast<double>(n) + 1.0; // N - n + 1
        eq.beta[n - 1] = (n_total / remaining) * root_ratio * su / sv;
        eq.sigma_z2[n - 1] = ((remaining - 1.0) / remaining) * ((m - 2.0) / m) * su * su;
    }
    for (int n = 0; n <= params.n_rounds; ++n)
        eq.sigma_path[n] = ((n_total - static_cast<double>(n)) / n_total) * sv * sv;

    eq.gamma = (2.0 / m) * root_ratio * su / sv;
    eq.psi = std::sqrt(m / (m - 2.0)) * sv / su;
    eq.phi = std::sqrt(m * (m - 2.0)) / (2.0 * m - 2.0) * sv / su;
    eq.lambda = 1.0 / (m * eq.gamma);
    return eq;
}

namespace {

void check_state_index(const MarketParams& params, int n) {
    if (n < 0 || n > params.n_rounds)
        throw std::out_of_range("state index n must be in [0, N], got " + std::to_string(n) +
                                " with N = " + std::to_string(params.n_rounds));
}

} // namespace

double informed_value(const MarketParams& params, const EquilibriumSolution& eq, int n,
                      double dev) {
    check_state_index(params, n);
    if (n == params.n_rounds) return 0.0;
    // M*gamma/4 = (1/2) sqrt((M-2)/M) sigma_u/sigma_v
    const double m = static_cast<double>(params.n_makers);
    return 0.25 * m * eq.gamma * dev * dev;
}

double maker_value(const MarketParams& params, const EquilibriumSolution& eq, int n) {
    check_state_index(params, n);
    const double m = static_cast<double>(params.n_makers);
    const double frac = (static_cast<double>(params.n_rounds - n)) / static_cast<double>(params.n_rounds);
    (void)eq;
    return frac / (m * std::sqrt(m * (m - 2.0))) * params.sigma_u * params.sigma_v;
}

} // namespace kdm
