#pragma once

#include <vector>

#include "kdm/equilibrium.hpp"
#include "kdm/params.hpp"

namespace kdm {

// One Gaussian-projection update: observing an order with informational
// component beta*(v - vbar)*dt and noise variance sigma_z2*dt gives
//   psi        = beta*Sigma_prev / (beta^2*Sigma_prev*dt + sigma_z2)
//   Sigma_next = Sigma_prev - psi^2*(beta^2*Sigma_prev*dt + sigma_z2)*dt
// computed in the algebraically equivalent form
//   Sigma_next = Sigma_prev * sigma_z2 / (beta^2*Sigma_prev*dt + sigma_z2)
// which keeps Sigma_next in [0, Sigma_prev] and hits zero exactly when
// sigma_z2 = 0. A zero denominator with Sigma_prev > 0 (beta = 0 and
// sigma_z2 = 0) is a domain error; with Sigma_prev = 0 the belief is
// already degenerate and the step is a no-op with psi = 0.
struct VarianceStep {
    double psi = 0.0;
    double sigma_next = 0.0;
};
VarianceStep variance_step(double beta, double sigma_z2, double sigma_prev, double dt);

// Intermediate state of the backward-induction solve at round k (1..N).
// sigma_prev is the variance entering the round, sigma the one leaving it.
// s and r are the informed/maker intercepts; the market-clearing step forces
// both to zero at every solved round. nu is the per-maker continuation value
// after round k, with nu = 0 at k = N.
struct InductionState {
    int round = 0;
    double gamma_k = 0.0;
    double psi_k = 0.0;
    double phi_k = 0.0;
    double beta_k = 0.0;
    double sigma_z2_k = 0.0;
    double sigma_prev = 0.0;
    double sigma_k = 0.0;
    double s_k = 0.0;
    double r_k = 0.0;
    double nu_k = 0.0;
};

// Full per-round trace of the induction solve, rounds 1..N in order.
std::vector<InductionState> induction_trace(const MarketParams& params);

// Reconstructs the equilibrium from the induction recursions alone:
//   phi_k  = sqrt( M(M-2)/(2M-2)^2 * (N/(N-k+1)) * Sigma_{k-1}/sigma_u^2 )
//   beta_k = (N/(N-k+1)) * (M-2)/(2M-2) / phi_k
//   gamma_k = (M-2)/(M(M-1)) / phi_k
//   sz2_k  = ((M-2)/M) * ((N-k)/(N-k+1)) * sigma_u^2
//   psi_k, Sigma_k from variance_step
// seeded by Sigma_0 = sigma_v^2, with the maker value accumulated backward
// from nu_N = 0. Deliberately does not evaluate the closed-form solution, so
// the two solvers stay independent cross-checks of each other.
// Throws std::domain_error for invalid params and std::runtime_error if a
// recursion ever produces a negative variance.
EquilibriumSolution solve_backward(const MarketParams& params);

// Residuals of the first-order and clearing identities at round n (1..N):
//   informed_slope = -2/gamma_sum + M*gamma*psi^2/2
//   informed_level = 1 - M*gamma*psi/2
//   clearing       = ((M-1)*gamma_sum*phi - M)/2 + 1
// with gamma_sum = M*gamma. All three vanish at equilibrium; they move in
// predictable directions when the coefficients are perturbed, which makes
// them useful diagnostics.
struct FocResiduals {
    double informed_slope = 0.0;
    double informed_level = 0.0;
    double clearing = 0.0;
};
FocResiduals foc_residuals(const MarketParams& params, const EquilibriumSolution& eq, int n);

} // namespace kdm
