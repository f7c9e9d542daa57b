#include "kdm/regimes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kdm {

std::string Regime::name() const {
    switch (kind) {
        case Kind::PerfectNoDisclosure: return "perfect_no_disclosure";
        case Kind::PerfectDisclosure: return "perfect_disclosure";
        case Kind::ImperfectNoDisclosure: return "imperfect_no_disclosure";
        case Kind::ImperfectDisclosure: return "imperfect_disclosure";
    }
    return "unknown";
}

TheoreticalOutcomes theoretical_outcomes(const Regime& regime, double sigma_v, double sigma_u) {
    if (!(sigma_v > 0.0) || !(sigma_u > 0.0))
        throw std::domain_error("sigma_v and sigma_u must be positive");
    if (regime.imperfect() && regime.m < 3)
        throw std::domain_error("imperfect-competition outcomes need M > 2, got M = " +
                                std::to_string(regime.m));

    const double ratio = sigma_v / sigma_u; // price impact scale
    const double money = sigma_v * sigma_u; // profit scale
    const double m = static_cast<double>(regime.m);

    TheoreticalOutcomes out;
    switch (regime.kind) {
        case Regime::Kind::PerfectNoDisclosure:
            out.price_impact = ratio;
            out.informed_profit = money;
            out.makers_profit_total = 0.0;
            out.autocorr = 0.0;
            break;
        case Regime::Kind::PerfectDisclosure:
            out.price_impact = 0.5 * ratio;
            out.informed_profit = 0.5 * money;
            out.makers_profit_total = 0.0;
            out.autocorr = 0.0;
            break;
        case Regime::Kind::ImperfectNoDisclosure:
            out.price_impact = (m - 1.0) / (m - 2.0) * ratio;
            out.informed_profit = money;
            out.makers_profit_total = money / (m - 2.0);
            out.autocorr = -(m - 1.0) / ((m - 1.0) * (m - 1.0) + 1.0);
            break;
        case Regime::Kind::ImperfectDisclosure:
            out.price_impact = 0.5 * std::sqrt(m / (m - 2.0)) * ratio;
            out.informed_profit = 0.5 * std::sqrt((m - 2.0) / m) * money;
            out.makers_profit_total = money / std::sqrt(m * (m - 2.0));
            out.autocorr = -1.0 / (2.0 * (m - 1.0));
            break;
    }
    out.noise_profit = -(out.informed_profit + out.makers_profit_total);
    return out;
}

} // namespace kdm
