#include "kdm/panel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kdm/rng.hpp"

namespace kdm {

double model_implied_effect(double m) {
    if (!(m >= 3.0))
        throw std::domain_error("model_implied_effect needs m >= 3, got " + std::to_string(m));
    return std::log(std::sqrt(m * (m - 2.0)) / (2.0 * (m - 1.0)));
}

void DgpConfig::validate() const {
    if (n_stocks < 1) throw std::domain_error("n_stocks must be >= 1");
    if (n_days < 2) throw std::domain_error("n_days must be >= 2");
    if (event_day <= 0 || event_day >= n_days)
        throw std::domain_error("event_day must satisfy 0 < event_day < n_days");
    if (noise_sd < 0.0) throw std::domain_error("noise_sd must be >= 0");
    if (cluster_rho < 0.0 || cluster_rho >= 1.0)
        throw std::domain_error("cluster_rho must be in [0, 1)");
}

std::vector<PanelRow> generate_panel(const DgpConfig& dgp, std::uint64_t seed) {
    dgp.validate();

    std::vector<PanelRow> rows;
    rows.reserve(static_cast<std::size_t>(dgp.n_stocks) * dgp.n_days);

    const double rho_common = std::sqrt(dgp.cluster_rho);
    const double rho_idio = std::sqrt(1.0 - dgp.cluster_rho);

    for (int i = 0; i < dgp.n_stocks; ++i) {
        PathRng rng(seed, static_cast<std::uint64_t>(i));

        // Stock-level draws: maker-count mode, then the persistent levels.
        const bool low_mode = rng.uniform01() < dgp.mmcnt_dist.low_weight;
        const double median = low_mode ? dgp.mmcnt_dist.low_median : dgp.mmcnt_dist.high_median;
        double mm = median * std::exp(dgp.mmcnt_dist.log_sd * rng.normal());
        mm = std::max(mm, dgp.use_model_implied_effect ? 3.0 : 1.0);
        const double log_mm = std::log1p(mm);

        const double cluster_shock = rng.normal();
        const double base_log_mktcap = std::log(150.0) + 1.2 * rng.normal();
        const double base_log_volume = std::log(5.0e4) + 1.5 * rng.normal();
        const double base_volatility = std::max(0.005, 0.04 + 0.012 * rng.normal());
        const double base_log_price = std::log(15.0) + 0.8 * rng.normal();

        const double post_effect = dgp.use_model_implied_effect
                                       ? model_implied_effect(mm)
                                       : dgp.beta1 + dgp.beta3 * log_mm;

        for (int d = 0; d < dgp.n_days; ++d) {
            PanelRow row;
            row.stock_id = i;
            row.date_index = d;
            row.post = d >= dgp.event_day ? 1 : 0;
            row.mmcnt_bar = mm;

            const double log_mktcap = base_log_mktcap + 0.05 * rng.normal();
            const double log_volume = base_log_volume + 0.3 * rng.normal();
            const double volatility = std::max(5.0e-4, base_volatility + 0.005 * rng.normal());
            const double log_price = base_log_price + 0.05 * rng.normal();
            row.mktcap = std::exp(log_mktcap);
            row.volume = std::exp(log_volume);
            row.volatility = volatility;
            row.inv_price = std::exp(-log_price);

            const double eps =
                dgp.noise_sd * (rho_common * cluster_shock + rho_idio * rng.normal());
            const double log_spread = dgp.alpha + post_effect * row.post + dgp.beta2 * log_mm +
                                      dgp.controls_gamma[0] * log_mktcap +
                                      dgp.controls_gamma[1] * log_volume +
                                      dgp.controls_gamma[2] * volatility +
                                      dgp.controls_gamma[3] * row.inv_price + eps;
            row.spread = std::exp(log_spread);
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace kdm
