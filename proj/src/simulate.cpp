#include "kdm/simulate.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace kdm {

namespace {
constexpr std::int64_t kBlockSize = 8192;
} // namespace

PathDraws draw_path(const MarketParams& params, const EquilibriumSolution& eq,
                    std::uint64_t seed, std::uint64_t path_index, bool antithetic) {
    const std::uint64_t stream = antithetic ? path_index / 2 : path_index;
    const double sign = (antithetic && (path_index & 1)) ? -1.0 : 1.0;
    PathRng rng(seed, stream);

    const double sqrt_dt = std::sqrt(params.dt());
    PathDraws draws;
    draws.v = sign * params.sigma_v * rng.normal();
    draws.du.resize(params.n_rounds);
    draws.dz.resize(params.n_rounds);
    for (int n = 0; n < params.n_rounds; ++n) {
        draws.du[n] = sign * params.sigma_u * sqrt_dt * rng.normal();
        draws.dz[n] = sign * std::sqrt(eq.sigma_z2[n]) * sqrt_dt * rng.normal();
    }
    return draws;
}

void simulate_path_from_draws(const MarketParams& params, const EquilibriumSolution& eq,
                              const PathDraws& draws, PathRecord& out) {
    const int n_rounds = params.n_rounds;
    const double dt = params.dt();

    out.v = draws.v;
    out.dx.resize(n_rounds);
    out.du = draws.du;
    out.dz = draws.dz;
    out.dy_per_maker.resize(n_rounds);
    out.prices.resize(n_rounds);
    out.vbar.assign(n_rounds + 1, 0.0);

    double vbar = 0.0;
    for (int n = 0; n < n_rounds; ++n) {
        const double dx = eq.beta[n] * (draws.v - vbar) * dt + draws.dz[n];
        const double dw = dx + draws.du[n];
        const double price = vbar + eq.lambda * dw;
        out.dx[n] = dx;
        out.dy_per_maker[n] = eq.gamma * (vbar - price);
        out.prices[n] = price;
        vbar += eq.psi * dx;
        out.vbar[n + 1] = vbar;
    }
}

PathRecord simulate_path(const MarketParams& params, const EquilibriumSolution& eq,
                         std::uint64_t seed, std::uint64_t path_index, bool antithetic) {
    PathRecord rec;
    simulate_path_from_draws(params, eq, draw_path(params, eq, seed, path_index, antithetic), rec);
    return rec;
}

double informed_path_profit(const PathRecord& rec) {
    double profit = 0.0;
    for (std::size_t n = 0; n < rec.dx.size(); ++n)
        profit += (rec.v - rec.prices[n]) * rec.dx[n];
    return profit;
}

double makers_path_profit_total(const PathRecord& rec) {
    double profit = 0.0;
    for (std::size_t n = 0; n < rec.dx.size(); ++n)
        profit += (rec.prices[n] - rec.v) * (rec.dx[n] + rec.du[n]);
    return profit;
}

std::vector<McAccumulator> mc_statistics(const MarketParams& params, const EquilibriumSolution& eq,
                                         const SimConfig& cfg, int n_stats, const PathStatFn& fn) {
    params.validate();
    if (cfg.n_paths < 1) throw std::domain_error("n_paths must be >= 1");
    if (n_stats < 1) throw std::invalid_argument("n_stats must be >= 1");

    const std::int64_t n_blocks = (cfg.n_paths + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<McAccumulator>> partials(
        static_cast<std::size_t>(n_blocks), std::vector<McAccumulator>(n_stats));

    std::atomic<std::int64_t> next_block{0};
    auto worker = [&]() {
        PathRecord rec;
        std::vector<double> stats(n_stats);
        for (;;) {
            const std::int64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            const std::int64_t begin = b * kBlockSize;
            const std::int64_t end = std::min(begin + kBlockSize, cfg.n_paths);
            std::vector<McAccumulator>& acc = partials[static_cast<std::size_t>(b)];
            for (std::int64_t i = begin; i < end; ++i) {
                simulate_path_from_draws(
                    params, eq,
                    draw_path(params, eq, cfg.seed, static_cast<std::uint64_t>(i), cfg.antithetic),
                    rec);
                fn(rec, stats.data());
                for (int s = 0; s < n_stats; ++s) acc[s].add(stats[s]);
            }
        }
    };

    const int n_threads = std::max(1, cfg.n_threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Merge in block order: the reduction is identical for any thread count.
    std::vector<McAccumulator> total(n_stats);
    for (const auto& block : partials)
        for (int s = 0; s < n_stats; ++s) total[s].merge(block[s]);
    return total;
}

ProfitEstimates estimate_profits(const MarketParams& params, const EquilibriumSolution& eq,
                                 const SimConfig& cfg) {
    const auto acc = mc_statistics(params, eq, cfg, 3, [](const PathRecord& rec, double* out) {
        const double pi_i = informed_path_profit(rec);
        const double pi_m = makers_path_profit_total(rec);
        out[0] = pi_i;
        out[1] = pi_m;
        out[2] = -pi_i - pi_m;
    });

    ProfitEstimates est;
    est.pi_informed = acc[0].estimate();
    est.pi_makers_total = acc[1].estimate();
    est.pi_noise = acc[2].estimate();
    // the residual identity holds per path; force it on the means too,
    // where Welford rounding could otherwise leave an ulp of slack
    est.pi_noise.mean = -(est.pi_informed.mean + est.pi_makers_total.mean);
    return est;
}

PriceMomentEstimates estimate_price_moments(const MarketParams& params,
                                            const EquilibriumSolution& eq, const SimConfig& cfg) {
    if (params.n_rounds < 3)
        throw std::domain_error("price-moment estimation needs N >= 3 for the pooled covariance");

    const int n_rounds = params.n_rounds;
    // Per-path stats: pooled mean square, pooled mean adjacent product, and
    // their product (for the delta-method covariance of the ratio).
    const auto acc = mc_statistics(params, eq, cfg, 3, [n_rounds](const PathRecord& rec, double* out) {
        double var_sum = 0.0;
        double cov_sum = 0.0;
        double dp_prev = 0.0; // dp_n for n >= 2, seeded below
        for (int n = 2; n <= n_rounds; ++n) {
            const double dp = rec.prices[n - 1] - rec.prices[n - 2];
            var_sum += dp * dp;
            if (n >= 3) cov_sum += dp_prev * dp;
            dp_prev = dp;
        }
        const double v = var_sum / static_cast<double>(n_rounds - 1);
        const double c = cov_sum / static_cast<double>(n_rounds - 2);
        out[0] = v;
        out[1] = c;
        out[2] = c * v;
    });

    PriceMomentEstimates est;
    est.var_dp = acc[0].estimate();
    est.cov_dp = acc[1].estimate();

    const double vbar = acc[0].mean;
    const double cbar = acc[1].mean;
    const double ratio = cbar / vbar;
    const double var_v = acc[0].variance();
    const double var_c = acc[1].variance();
    const double cov_cv = acc[2].mean - cbar * vbar; // sample cross moment
    const double n_paths = static_cast<double>(acc[0].n);

    est.autocorr.mean = ratio;
    est.autocorr.n_paths = acc[0].n;
    if (acc[0].n >= 2) {
        const double var_ratio =
            std::max(0.0, var_c - 2.0 * ratio * cov_cv + ratio * ratio * var_v) /
            (n_paths * vbar * vbar);
        est.autocorr.std_err = std::sqrt(var_ratio);
    }
    return est;
}

std::vector<McEstimate> estimate_posterior_variance(const MarketParams& params,
                                                    const EquilibriumSolution& eq,
                                                    const SimConfig& cfg) {
    const int n_states = params.n_rounds + 1;
    const auto acc = mc_statistics(params, eq, cfg, n_states, [n_states](const PathRecord& rec, double* out) {
        for (int n = 0; n < n_states; ++n) {
            const double dev = rec.v - rec.vbar[n];
            out[n] = dev * dev;
        }
    });

    std::vector<McEstimate> est(n_states);
    for (int n = 0; n < n_states; ++n) est[n] = acc[n].estimate();
    return est;
}

} // namespace kdm
