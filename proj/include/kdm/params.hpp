#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kdm {

// Exogenous primitives of the N-round trading game on the horizon [0,1].
// Rounds are numbered 1..N as in the usual discrete-time convention; all
// arrays in this library are 0-based, so round n lives at index n-1 and
// post-round states (beliefs, variances) at index n.
struct MarketParams {
    int n_rounds = 50;      // N, trading rounds; dt = 1/N
    int n_makers = 3;       // M, market makers; a symmetric linear equilibrium needs M > 2
    double sigma_v = 1.0;   // fundamental standard deviation (price units)
    double sigma_u = 1.0;   // noise-flow standard deviation per unit time (share units)

    double dt() const { return 1.0 / static_cast<double>(n_rounds); }

    void validate() const {
        if (n_rounds < 1)
            throw std::domain_error("n_rounds must be >= 1, got " + std::to_string(n_rounds));
        if (n_makers < 3)
            throw std::domain_error(
                "n_makers must satisfy M > 2 (need at least 3 market makers for a symmetric "
                "linear equilibrium), got " + std::to_string(n_makers));
        if (!(sigma_v > 0.0))
            throw std::domain_error("sigma_v must be positive");
        if (!(sigma_u > 0.0))
            throw std::domain_error("sigma_u must be positive");
    }
};

} // namespace kdm
