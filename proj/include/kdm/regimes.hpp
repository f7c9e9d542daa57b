#pragma once

#include <string>

#include "kdm/params.hpp"

namespace kdm {

// The four market structures whose horizon-total outcomes have closed forms.
// The perfect-competition regimes carry no maker count; the imperfect ones
// require M >= 3.
struct Regime {
    enum class Kind {
        PerfectNoDisclosure,
        PerfectDisclosure,
        ImperfectNoDisclosure,
        ImperfectDisclosure,
    };

    Kind kind = Kind::ImperfectDisclosure;
    int m = 0; // only meaningful for the imperfect regimes

    static Regime perfect_no_disclosure() { return {Kind::PerfectNoDisclosure, 0}; }
    static Regime perfect_disclosure() { return {Kind::PerfectDisclosure, 0}; }
    static Regime imperfect_no_disclosure(int m) { return {Kind::ImperfectNoDisclosure, m}; }
    static Regime imperfect_disclosure(int m) { return {Kind::ImperfectDisclosure, m}; }

    bool imperfect() const {
        return kind == Kind::ImperfectNoDisclosure || kind == Kind::ImperfectDisclosure;
    }
    std::string name() const;
};

// Horizon-total equilibrium outcomes. Profits are ex-ante expectations over
// the whole horizon (money units), never per-round figures. noise_profit is
// residual, so the three profits sum to zero exactly.
struct TheoreticalOutcomes {
    double price_impact = 0.0;        // Kyle lambda
    double informed_profit = 0.0;     // Pi_I
    double makers_profit_total = 0.0; // Pi_M, aggregate across all M makers
    double noise_profit = 0.0;        // Pi_N = -Pi_I - Pi_M
    double autocorr = 0.0;            // large-N limit of Corr(dp_n, dp_{n+1}), in (-1, 0]
};

// Closed-form outcome constants for a regime. Throws std::domain_error for
// an imperfect regime with M < 3.
TheoreticalOutcomes theoretical_outcomes(const Regime& regime, double sigma_v, double sigma_u);

} // namespace kdm
