#pragma once

#include <string>

#include <json.hpp>

#include "kdm/equilibrium.hpp"
#include "kdm/mc_stats.hpp"
#include "kdm/regimes.hpp"
#include "kdm/regression.hpp"
#include "kdm/simulate.hpp"

namespace kdm {

// All reports use nlohmann::ordered_json with a fixed key order so that
// identical inputs produce byte-identical documents (golden-file friendly).
using Json = nlohmann::ordered_json;

Json to_json(const MarketParams& params);
Json to_json(const EquilibriumSolution& eq); // keys: params, beta, sigma_z2, gamma, psi, phi, Sigma, lambda
Json to_json(const McEstimate& e);           // std_err serialized as null when undefined
Json to_json(const TheoreticalOutcomes& t);
Json to_json(const RegressionResult& r);     // keys: coefficients, cluster_se, t, p, r2, n_obs, n_clusters

// FNV-1a over the canonical solution document; stable fingerprint for
// simulation reports.
std::string equilibrium_hash(const EquilibriumSolution& eq);

} // namespace kdm
