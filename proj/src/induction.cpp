#include "kdm/induction.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kdm {

VarianceStep variance_step(double beta, double sigma_z2, double sigma_prev, double dt) {
    if (sigma_prev < 0.0) throw std::domain_error("variance_step: Sigma_prev must be >= 0");
    if (sigma_z2 < 0.0) throw std::domain_error("variance_step: sigma_z2 must be >= 0");

    const double info_var = beta * beta * sigma_prev * dt; // variance of the informational part
    const double den = info_var + sigma_z2;
    if (den <= 0.0) {
        if (sigma_prev == 0.0) return {0.0, 0.0}; // degenerate belief, nothing to update
        throw std::domain_error("variance_step: zero observation variance with Sigma_prev > 0 "
                                "(beta = 0 and sigma_z2 = 0)");
    }

    VarianceStep step;
    step.psi = beta * sigma_prev / den;
    // Equals Sigma_prev - psi^2*den*dt but cannot go negative and is exactly
    // zero at the terminal round where sigma_z2 = 0.
    step.sigma_next = sigma_prev * (sigma_z2 / den);
    return step;
}

std::vector<InductionState> induction_trace(const MarketParams& params) {
    params.validate();

    const int n_rounds = params.n_rounds;
    const double n_total = static_cast<double>(n_rounds);
    const double m = static_cast<double>(params.n_makers);
    const double dt = params.dt();
    const double su2 = params.sigma_u * params.sigma_u;

    std::vector<InductionState> trace(n_rounds);
    double sigma_prev = params.sigma_v * params.sigma_v; // Sigma_0

    for (int k = 1; k <= n_rounds; ++k) {
        InductionState& st = trace[k - 1];
        st.round = k;
        st.sigma_prev = sigma_prev;

        const double remaining = n_total - static_cast<double>(k) + 1.0; // N - k + 1
        st.phi_k = std::sqrt(m * (m - 2.0) / ((2.0 * m - 2.0) * (2.0 * m - 2.0)) *
                             (n_total / remaining) * sigma_prev / su2);
        st.beta_k = (n_total / remaining) * (m - 2.0) / (2.0 * m - 2.0) / st.phi_k;
        st.gamma_k = (m - 2.0) / (m * (m - 1.0)) / st.phi_k;
        st.sigma_z2_k = ((m - 2.0) / m) * ((remaining - 1.0) / remaining) * su2;
        if (st.sigma_z2_k < 0.0)
            throw std::runtime_error("induction produced a negative dissimulation variance at "
                                     "round " + std::to_string(k));

        const VarianceStep step = variance_step(st.beta_k, st.sigma_z2_k, sigma_prev, dt);
        st.psi_k = step.psi;
        st.sigma_k = step.sigma_next;
        if (st.sigma_k < 0.0)
            throw std::runtime_error("induction produced a negative posterior variance at round " +
                                     std::to_string(k));

        // Market clearing kills both intercepts at every round.
        st.s_k = 0.0;
        st.r_k = 0.0;

        sigma_prev = st.sigma_k;
    }

    // Per-maker continuation value, accumulated backward from nu_N = 0.
    double nu = 0.0;
    for (int k = n_rounds; k >= 1; --k) {
        trace[k - 1].nu_k = nu;
        nu += trace[k - 1].beta_k * trace[k - 1].sigma_prev * dt / (m * (m - 2.0));
    }

    return trace;
}

EquilibriumSolution solve_backward(const MarketParams& params) {
    const std::vector<InductionState> trace = induction_trace(params);

    EquilibriumSolution eq;
    eq.params = params;
    eq.beta.resize(params.n_rounds);
    eq.sigma_z2.resize(params.n_rounds);
    eq.sigma_path.resize(params.n_rounds + 1);
    eq.sigma_path[0] = params.sigma_v * params.sigma_v;
    for (const InductionState& st : trace) {
        eq.beta[st.round - 1] = st.beta_k;
        eq.sigma_z2[st.round - 1] = st.sigma_z2_k;
        eq.sigma_path[st.round] = st.sigma_k;
    }
    // gamma, psi, phi are round-invariant; take them from the first round.
    eq.gamma = trace.front().gamma_k;
    eq.psi = trace.front().psi_k;
    eq.phi = trace.front().phi_k;
    eq.lambda = 1.0 / (static_cast<double>(params.n_makers) * eq.gamma);
    return eq;
}

FocResiduals foc_residuals(const MarketParams& params, const EquilibriumSolution& eq, int n) {
    if (n < 1 || n > params.n_rounds)
        throw std::out_of_range("round index must be in [1, N], got " + std::to_string(n));

    const double m = static_cast<double>(params.n_makers);
    const double gamma_sum = m * eq.gamma;

    FocResiduals res;
    res.informed_slope = -2.0 / gamma_sum + m * eq.gamma * eq.psi * eq.psi / 2.0;
    res.informed_level = 1.0 - m * eq.gamma * eq.psi / 2.0;
    res.clearing = ((m - 1.0) * gamma_sum * eq.phi - m) / 2.0 + 1.0;
    return res;
}

} // namespace kdm
