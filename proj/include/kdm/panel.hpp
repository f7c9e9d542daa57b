#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kdm/params.hpp"

namespace kdm {

// One stock-day observation of a daily panel.
struct PanelRow {
    int stock_id = 0;
    int date_index = 0;    // trading day
    int post = 0;          // 1 on or after the event day
    double spread = 0.0;   // relative bid-ask spread, percent; > 0
    double mmcnt_bar = 0.0; // stock-level average market maker count; >= 1
    double mktcap = 0.0;
    double volume = 0.0;
    double volatility = 0.0; // 20-day return SD
    double inv_price = 0.0;  // 1/price
};

// Theory-implied total log-spread effect of the disclosure event for a stock
// with average maker count m:
//   log( [sqrt(M)/(2 sqrt(M-2))] / [(M-1)/(M-2)] ) = log( sqrt(M(M-2)) / (2(M-1)) )
// Strictly negative, increasing in m toward log(1/2). Rejects m < 3.
double model_implied_effect(double m);

// Synthetic-panel generator config. Spreads follow
//   log(spread) = alpha + b1 post + b2 log(1+mm) + b3 post*log(1+mm)
//                 + g1 log(mktcap) + g2 log(volume) + g3 vol + g4 invprice + eps
// with within-stock equicorrelated errors
//   eps = noise_sd * (sqrt(rho) a_i + sqrt(1-rho) e_it).
// Coefficient defaults are the headline regression estimates; distribution
// shapes only need to be order-of-magnitude realistic.
struct MmcntDistribution {
    double low_median = 3.0;   // thin-coverage mode
    double high_median = 18.0; // dealer-market mode
    double low_weight = 0.35;
    double log_sd = 0.6;
};

struct DgpConfig {
    int n_stocks = 500;
    int n_days = 200;
    int event_day = 100; // first post day; 0 < event_day < n_days

    double alpha = 1.929;
    double beta1 = -0.374;
    double beta2 = -0.378;
    double beta3 = 0.105;
    std::array<double, 4> controls_gamma = {-0.449, -0.047, 4.989, 0.086};

    double noise_sd = 0.4;
    double cluster_rho = 0.3; // within-stock error correlation, in [0,1)
    MmcntDistribution mmcnt_dist;

    // Replace the planted post effect b1 + b3 log(1+mm) by
    // model_implied_effect(mm) (maker counts clamped to >= 3).
    bool use_model_implied_effect = false;

    void validate() const;
};

// Seeded panel in (stock, day) order.
std::vector<PanelRow> generate_panel(const DgpConfig& dgp, std::uint64_t seed);

} // namespace kdm
