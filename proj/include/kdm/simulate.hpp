#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kdm/equilibrium.hpp"
#include "kdm/mc_stats.hpp"
#include "kdm/params.hpp"
#include "kdm/rng.hpp"

namespace kdm {

struct SimConfig {
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 42;
    bool antithetic = false; // pair path 2j+1 with the negated draws of path 2j
    int n_threads = 1;       // results are identical for any value >= 1
};

// Raw Gaussian draws for one path: fundamental v, noise orders du_n and
// dissimulation draws dz_n for n = 1..N (already scaled by their SDs).
struct PathDraws {
    double v = 0.0;
    std::vector<double> du;
    std::vector<double> dz;
};

// One simulated trajectory of the N-round game under equilibrium play.
struct PathRecord {
    double v = 0.0;                    // drawn fundamental
    std::vector<double> dx;            // informed orders, n = 1..N
    std::vector<double> du;            // noise orders
    std::vector<double> dz;            // dissimulation draws
    std::vector<double> dy_per_maker;  // per-maker order (symmetric, one value)
    std::vector<double> prices;        // p_n
    std::vector<double> vbar;          // beliefs vbar_0..vbar_N (length N+1)
};

// Draws for path `path_index` of stream `seed`. With antithetic on, path
// 2j+1 reuses stream 2j with all normals negated.
PathDraws draw_path(const MarketParams& params, const EquilibriumSolution& eq,
                    std::uint64_t seed, std::uint64_t path_index, bool antithetic);

// Deterministic path kernel: given the draws, plays the equilibrium
// strategies and clears the market each round:
//   dx_n    = beta_n (v - vbar_{n-1}) dt + dz_n
//   p_n     = vbar_{n-1} + lambda (dx_n + du_n)
//   dy_n^m  = gamma (vbar_{n-1} - p_n)
//   vbar_n  = vbar_{n-1} + psi dx_n
void simulate_path_from_draws(const MarketParams& params, const EquilibriumSolution& eq,
                              const PathDraws& draws, PathRecord& out);

PathRecord simulate_path(const MarketParams& params, const EquilibriumSolution& eq,
                         std::uint64_t seed, std::uint64_t path_index, bool antithetic = false);

// Realized horizon profits along one path.
double informed_path_profit(const PathRecord& rec);
double makers_path_profit_total(const PathRecord& rec);

// Generic Monte Carlo driver: fills `stats_out` (length n_stats) per path and
// returns one accumulator per statistic. Paths are processed in fixed-size
// blocks whose partial sums merge in block order, so the result is a
// deterministic function of (params, eq, cfg) for any cfg.n_threads.
using PathStatFn = std::function<void(const PathRecord& rec, double* stats_out)>;
std::vector<McAccumulator> mc_statistics(const MarketParams& params, const EquilibriumSolution& eq,
                                         const SimConfig& cfg, int n_stats, const PathStatFn& fn);

struct ProfitEstimates {
    McEstimate pi_informed;
    McEstimate pi_makers_total;
    McEstimate pi_noise; // residual per path: -pi_I - pi_M
};
ProfitEstimates estimate_profits(const MarketParams& params, const EquilibriumSolution& eq,
                                 const SimConfig& cfg);

// Pooled interior price-change moments. Price changes are dp_1 = p_1 and
// dp_n = p_n - p_{n-1}; the first round is nonstationary, so squares pool
// over n = 2..N and adjacent products over pairs (n, n+1) with n = 2..N-1.
// autocorr is the ratio of pooled means with a delta-method standard error.
// Requires N >= 3.
struct PriceMomentEstimates {
    McEstimate var_dp;
    McEstimate cov_dp;
    McEstimate autocorr;
};
PriceMomentEstimates estimate_price_moments(const MarketParams& params,
                                            const EquilibriumSolution& eq, const SimConfig& cfg);

// Entry n estimates Sigma_n = E[(v - vbar_n)^2], n = 0..N.
std::vector<McEstimate> estimate_posterior_variance(const MarketParams& params,
                                                    const EquilibriumSolution& eq,
                                                    const SimConfig& cfg);

} // namespace kdm
