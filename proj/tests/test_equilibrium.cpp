#include <cmath>
#include <vector>

#include "kdm/equilibrium.hpp"
#include "kdm/regimes.hpp"
#include "testkit.hpp"

using namespace kdm;

namespace {

void check_solution_invariants(const EquilibriumSolution& eq, double tol) {
    const MarketParams& p = eq.params;
    const double m = static_cast<double>(p.n_makers);
    const int n_rounds = p.n_rounds;

    CHECK(eq.sigma_z2[n_rounds - 1] == 0.0);
    CHECK(eq.sigma_path[0] == p.sigma_v * p.sigma_v);
    CHECK(eq.sigma_path[n_rounds] == 0.0);
    for (int n = 1; n <= n_rounds; ++n) CHECK(eq.sigma_path[n] < eq.sigma_path[n - 1]);

    CHECK(eq.lambda == 1.0 / (m * eq.gamma));
    CHECK_REL(eq.psi, (2.0 * m - 2.0) / (m - 2.0) * eq.phi, tol);
    CHECK(std::abs(eq.psi * m * eq.gamma - 2.0) < tol);
    CHECK_REL(m * eq.gamma, (m - 2.0) / ((m - 1.0) * eq.phi), tol);

    // flow identity: (M/(M-2)) (beta^2 Sigma dt + sz2) = sigma_u^2 each round
    for (int n = 0; n < n_rounds; ++n) {
        const double lhs =
            m / (m - 2.0) *
            (eq.beta[n] * eq.beta[n] * eq.sigma_path[n] * p.dt() + eq.sigma_z2[n]);
        CHECK_REL(lhs, p.sigma_u * p.sigma_u, tol);
    }

    // beta_n * Sigma_{n-1} constant across rounds
    const double prod0 = eq.beta[0] * eq.sigma_path[0];
    for (int n = 1; n < n_rounds; ++n) CHECK_REL(eq.beta[n] * eq.sigma_path[n], prod0, tol);
}

void test_closed_form_example() {
    SECTION("closed form at N=4, M=3, unit sigmas");
    const MarketParams p{4, 3, 1.0, 1.0};
    const EquilibriumSolution eq = solve_closed_form(p);

    CHECK_CLOSE(eq.psi, 1.7320508, 1e-6);
    CHECK_CLOSE(eq.gamma, 0.3849002, 1e-6);
    CHECK_CLOSE(eq.lambda, 0.8660254, 1e-6);
    CHECK_CLOSE(eq.phi, 0.4330127, 1e-6);

    const std::vector<double> beta_expected = {0.57735027, 0.76980036, 1.1547005, 2.3094011};
    const std::vector<double> sz2_expected = {0.25, 0.22222222, 0.16666667, 0.0};
    const std::vector<double> sigma_expected = {1.0, 0.75, 0.5, 0.25, 0.0};
    for (int n = 0; n < 4; ++n) {
        CHECK_CLOSE(eq.beta[n], beta_expected[n], 1e-7);
        CHECK_CLOSE(eq.sigma_z2[n], sz2_expected[n], 1e-7);
    }
    for (int n = 0; n <= 4; ++n) CHECK_CLOSE(eq.sigma_path[n], sigma_expected[n], 1e-12);

    check_solution_invariants(eq, 1e-12);
}

void test_single_round() {
    SECTION("degenerate single round");
    const EquilibriumSolution eq = solve_closed_form({1, 3, 1.0, 1.0});
    CHECK(eq.sigma_z2.size() == 1);
    CHECK(eq.sigma_z2[0] == 0.0);
    CHECK(eq.sigma_path[0] == 1.0);
    CHECK(eq.sigma_path[1] == 0.0);
    CHECK_CLOSE(eq.beta[0], std::sqrt(1.0 / 3.0), 1e-15);
}

void test_param_errors() {
    SECTION("parameter domain errors");
    CHECK_THROWS(solve_closed_form({4, 2, 1.0, 1.0}), std::domain_error);
    CHECK_THROWS(solve_closed_form({4, 3, 0.0, 1.0}), std::domain_error);
    CHECK_THROWS(solve_closed_form({4, 3, 1.0, -1.0}), std::domain_error);
    CHECK_THROWS(solve_closed_form({0, 3, 1.0, 1.0}), std::domain_error);
    // the M error message names the requirement
    try {
        solve_closed_form({4, 2, 1.0, 1.0});
        CHECK_MSG(false, "expected a throw");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("M > 2") != std::string::npos);
    }
}

void test_invariant_grid() {
    SECTION("invariants over an (N, M) grid");
    for (int m : {3, 4, 5, 10, 37, 200})
        for (int n : {1, 2, 7, 100, 1000}) {
            const EquilibriumSolution eq = solve_closed_form({n, m, 2.5, 0.4});
            check_solution_invariants(eq, 1e-12);
        }
}

void test_large_m_limit() {
    SECTION("perfect-competition limit");
    const EquilibriumSolution eq = solve_closed_form({10, 1000000, 2.0, 5.0});
    CHECK_REL(eq.lambda, 0.5 * 2.0 / 5.0, 1e-5);
}

void test_table_outcomes() {
    SECTION("regime outcome constants");
    const TheoreticalOutcomes ours = theoretical_outcomes(Regime::imperfect_disclosure(3), 1, 1);
    CHECK_CLOSE(ours.price_impact, 0.8660254038, 1e-9);
    CHECK_CLOSE(ours.informed_profit, 0.2886751346, 1e-9);
    CHECK_CLOSE(ours.makers_profit_total, 0.5773502692, 1e-9);
    CHECK_CLOSE(ours.noise_profit, -0.8660254038, 1e-9);
    CHECK_CLOSE(ours.autocorr, -0.25, 1e-15);

    const TheoreticalOutcomes kyle = theoretical_outcomes(Regime::perfect_no_disclosure(), 1, 1);
    CHECK(kyle.price_impact == 1.0);
    CHECK(kyle.informed_profit == 1.0);
    CHECK(kyle.makers_profit_total == 0.0);
    CHECK(kyle.noise_profit == -1.0);
    CHECK(kyle.autocorr == 0.0);

    const TheoreticalOutcomes nd = theoretical_outcomes(Regime::imperfect_no_disclosure(3), 1, 1);
    CHECK_CLOSE(nd.price_impact, 2.0, 1e-15);
    CHECK_CLOSE(nd.makers_profit_total, 1.0, 1e-15);
    CHECK_CLOSE(nd.autocorr, -0.4, 1e-15);

    // residual profit identity, all regimes, non-unit sigmas
    for (const Regime& r : {Regime::perfect_no_disclosure(), Regime::perfect_disclosure(),
                            Regime::imperfect_no_disclosure(7), Regime::imperfect_disclosure(7)}) {
        const TheoreticalOutcomes t = theoretical_outcomes(r, 3.2, 0.7);
        CHECK(t.informed_profit + t.makers_profit_total + t.noise_profit == 0.0);
        CHECK(t.autocorr <= 0.0);
    }

    CHECK_THROWS(theoretical_outcomes(Regime::imperfect_disclosure(2), 1, 1), std::domain_error);
    CHECK_THROWS(theoretical_outcomes(Regime::imperfect_no_disclosure(0), 1, 1),
                 std::domain_error);
}

void test_impact_consistency() {
    SECTION("price impact equals solved lambda");
    for (int m : {3, 4, 10, 100})
        for (int n : {1, 5, 50}) {
            const EquilibriumSolution eq = solve_closed_form({n, m, 1.4, 0.9});
            const TheoreticalOutcomes t =
                theoretical_outcomes(Regime::imperfect_disclosure(m), 1.4, 0.9);
            CHECK_REL(t.price_impact, eq.lambda, 1e-13);
        }
}

void test_value_functions() {
    SECTION("informed and maker value functions");
    const MarketParams p3{4, 3, 1.0, 1.0};
    const EquilibriumSolution eq3 = solve_closed_form(p3);
    CHECK_CLOSE(informed_value(p3, eq3, 0, 1.0), 0.288675, 1e-6);
    CHECK(informed_value(p3, eq3, 2, 0.0) == 0.0);
    CHECK(informed_value(p3, eq3, 4, 1.7) == 0.0); // terminal

    const MarketParams p8{4, 8, 2.0, 1.0};
    const EquilibriumSolution eq8 = solve_closed_form(p8);
    CHECK_CLOSE(informed_value(p8, eq8, 1, 3.0), 1.9485572, 1e-6);

    CHECK_CLOSE(maker_value(p3, eq3, 0), 0.19245009, 1e-7);
    CHECK_CLOSE(3.0 * maker_value(p3, eq3, 0), 0.57735027, 1e-7);
    CHECK(maker_value(p3, eq3, 4) == 0.0);

    const MarketParams p4{10, 4, 1.0, 1.0};
    const EquilibriumSolution eq4 = solve_closed_form(p4);
    CHECK_CLOSE(maker_value(p4, eq4, 5), 0.044194174, 1e-8);

    // aggregate maker value at n=0 matches the regime constant
    const TheoreticalOutcomes t = theoretical_outcomes(Regime::imperfect_disclosure(4), 1, 1);
    CHECK_REL(4.0 * maker_value(p4, eq4, 0), t.makers_profit_total, 1e-13);

    CHECK_THROWS(informed_value(p3, eq3, 5, 1.0), std::out_of_range);
    CHECK_THROWS(informed_value(p3, eq3, -1, 1.0), std::out_of_range);
    CHECK_THROWS(maker_value(p3, eq3, 11), std::out_of_range);
}

} // namespace

int main() {
    test_closed_form_example();
    test_single_round();
    test_param_errors();
    test_invariant_grid();
    test_large_m_limit();
    test_table_outcomes();
    test_impact_consistency();
    test_value_functions();
    return testkit::summary("test_equilibrium");
}
