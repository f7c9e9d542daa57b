#include "kdm/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace kdm {

Json to_json(const MarketParams& params) {
    Json j;
    j["N"] = params.n_rounds;
    j["M"] = params.n_makers;
    j["sigma_v"] = params.sigma_v;
    j["sigma_u"] = params.sigma_u;
    return j;
}

Json to_json(const EquilibriumSolution& eq) {
    Json j;
    j["params"] = to_json(eq.params);
    j["beta"] = eq.beta;
    j["sigma_z2"] = eq.sigma_z2;
    j["gamma"] = eq.gamma;
    j["psi"] = eq.psi;
    j["phi"] = eq.phi;
    j["Sigma"] = eq.sigma_path;
    j["lambda"] = eq.lambda;
    return j;
}

Json to_json(const McEstimate& e) {
    Json j;
    j["mean"] = e.mean;
    if (e.has_std_err())
        j["std_err"] = e.std_err;
    else
        j["std_err"] = nullptr;
    j["n_paths"] = e.n_paths;
    return j;
}

Json to_json(const TheoreticalOutcomes& t) {
    Json j;
    j["price_impact"] = t.price_impact;
    j["informed_profit"] = t.informed_profit;
    j["makers_profit_total"] = t.makers_profit_total;
    j["noise_profit"] = t.noise_profit;
    j["autocorr"] = t.autocorr;
    return j;
}

Json to_json(const RegressionResult& r) {
    Json coef, se, t, p;
    for (int j = 0; j < kDidCoefCount; ++j) {
        coef[kDidCoefNames[j]] = r.coef[j];
        se[kDidCoefNames[j]] = r.cluster_se[j];
        t[kDidCoefNames[j]] = r.t_stat[j];
        p[kDidCoefNames[j]] = r.p_value[j];
    }
    Json j;
    j["coefficients"] = coef;
    j["cluster_se"] = se;
    j["t"] = t;
    j["p"] = p;
    j["r2"] = r.r2;
    j["n_obs"] = r.n_obs;
    j["n_clusters"] = r.n_clusters;
    return j;
}

std::string equilibrium_hash(const EquilibriumSolution& eq) {
    const std::string doc = to_json(eq).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : doc) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace kdm
