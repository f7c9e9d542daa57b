#pragma once

#include <vector>

#include "kdm/params.hpp"

namespace kdm {

// Per-round equilibrium coefficients and the posterior-variance path of the
// unique symmetric linear equilibrium.
//
// Units: beta is shares per price-deviation per unit time, sigma_z2 is
// share^2 per unit time, gamma is shares per price unit, psi/lambda are
// price per share, sigma_path is price^2.
struct EquilibriumSolution {
    MarketParams params;
    std::vector<double> beta;       // informed aggressiveness beta_n, n = 1..N
    std::vector<double> sigma_z2;   // dissimulation variance sigma_{z,n}^2; zero at n = N
    double gamma = 0.0;             // maker slope, constant across rounds
    double psi = 0.0;               // disclosure sensitivity, constant across rounds
    double phi = 0.0;               // pre-disclosure projection coefficient, constant
    std::vector<double> sigma_path; // posterior variance Sigma_n, n = 0..N (length N+1)
    double lambda = 0.0;            // price impact, 1/(M*gamma)
};

// Closed-form equilibrium:
//   beta_n   = (N/(N-n+1)) sqrt((M-2)/M) sigma_u/sigma_v
//   sz2_n    = ((N-n)/(N-n+1)) ((M-2)/M) sigma_u^2
//   gamma    = (2/M) sqrt((M-2)/M) sigma_u/sigma_v
//   psi      = sqrt(M/(M-2)) sigma_v/sigma_u
//   phi      = sqrt(M(M-2))/(2M-2) sigma_v/sigma_u
//   Sigma_n  = ((N-n)/N) sigma_v^2
// Throws std::domain_error for M < 3 or nonpositive sigmas.
EquilibriumSolution solve_closed_form(const MarketParams& params);

// Informed trader's continuation value after round n (state index 0..N)
// at belief deviation dev = v - vbar_n. Quadratic in dev, zero at n = N.
double informed_value(const MarketParams& params, const EquilibriumSolution& eq,
                      int n, double dev);

// A single maker's continuation value after round n: linear decay to zero
// at n = N. Times M it equals the aggregate makers' expected profit.
double maker_value(const MarketParams& params, const EquilibriumSolution& eq, int n);

} // namespace kdm
