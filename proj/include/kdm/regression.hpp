#pragma once

#include <array>
#include <string>
#include <vector>

#include "kdm/panel.hpp"

namespace kdm {

// Pooled OLS of log(spread) on the event/competition terms plus controls,
// with cluster-robust (CR1) standard errors at the stock level.
inline constexpr int kDidCoefCount = 8;
inline constexpr std::array<const char*, kDidCoefCount> kDidCoefNames = {
    "intercept", "post",       "log_mm",     "post_x_log_mm",
    "log_mktcap", "log_volume", "volatility", "inv_price",
};

struct RegressionResult {
    std::array<double, kDidCoefCount> coef{};
    std::array<double, kDidCoefCount> cluster_se{};
    std::array<double, kDidCoefCount> classical_se{};
    std::array<double, kDidCoefCount> t_stat{};
    std::array<double, kDidCoefCount> p_value{}; // two-sided, t(G-1)
    std::array<double, kDidCoefCount * kDidCoefCount> cov{}; // cluster-robust, row-major
    double r2 = 0.0;
    std::int64_t n_obs = 0;
    int n_clusters = 0;

    static int index_of(const std::string& name);
    double coef_named(const std::string& name) const { return coef[index_of(name)]; }
    double se_named(const std::string& name) const { return cluster_se[index_of(name)]; }
};

// Fits the regression. The sandwich uses the CR1 small-sample scaling
// G/(G-1) * (n-1)/(n-k); inference uses t with G-1 degrees of freedom.
// Throws std::invalid_argument on a rank-deficient design (naming the
// offending column) or when fewer than two clusters are present.
RegressionResult fit_did(const std::vector<PanelRow>& rows);

// beta1_hat + beta3_hat * log(1 + mmcnt) and the implied percent change.
struct TotalEffect {
    double effect_log = 0.0;
    double pct_change = 0.0; // exp(effect_log) - 1, as a fraction
};
TotalEffect total_effect(const RegressionResult& result, double mmcnt);

// Student-t helpers used for the p-values and confidence intervals.
double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);

} // namespace kdm
