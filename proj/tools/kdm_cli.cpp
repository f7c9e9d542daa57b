// Command-line front end: equilibrium solving, Monte Carlo simulation,
// verification, regime comparison, and the synthetic difference-in-
// differences pipeline. Every report embeds the resolved configuration and
// the seed, and identical invocations produce byte-identical output.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdm/csv_ingest.hpp"
#include "kdm/equilibrium.hpp"
#include "kdm/induction.hpp"
#include "kdm/json_io.hpp"
#include "kdm/panel.hpp"
#include "kdm/regimes.hpp"
#include "kdm/regression.hpp"
#include "kdm/simulate.hpp"
#include "kdm/verify.hpp"

namespace {

using kdm::Json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << text;
}

void emit_json(const Json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// ---------------------------------------------------------------- solve ----

int cmd_solve(const kdm::MarketParams& params, bool backward, const std::string& out_path) {
    const kdm::EquilibriumSolution eq =
        backward ? kdm::solve_backward(params) : kdm::solve_closed_form(params);
    emit_json(kdm::to_json(eq), out_path);
    return 0;
}

// -------------------------------------------------------------- compare ----

kdm::Regime regime_from_name(const std::string& name, int m) {
    if (name == "perfect-no-disclosure") return kdm::Regime::perfect_no_disclosure();
    if (name == "perfect-disclosure") return kdm::Regime::perfect_disclosure();
    if (name == "imperfect-no-disclosure") return kdm::Regime::imperfect_no_disclosure(m);
    if (name == "imperfect-disclosure") return kdm::Regime::imperfect_disclosure(m);
    throw std::invalid_argument(
        "unknown regime '" + name +
        "' (choose all, perfect-no-disclosure, perfect-disclosure, imperfect-no-disclosure, "
        "imperfect-disclosure)");
}

int cmd_compare(int m, double sigma_v, double sigma_u, const std::string& regime_name,
                const std::string& format, const std::string& out_path) {
    if (regime_name != "all") {
        const kdm::Regime regime = regime_from_name(regime_name, m);
        const kdm::TheoreticalOutcomes t = kdm::theoretical_outcomes(regime, sigma_v, sigma_u);
        Json j;
        j["params"] = {{"M", m}, {"sigma_v", sigma_v}, {"sigma_u", sigma_u}};
        j["regime"] = regime.name();
        j["outcomes"] = kdm::to_json(t);
        if (format == "json") {
            emit_json(j, out_path);
        } else {
            char buf[256];
            std::string text = regime.name() + "\n";
            std::snprintf(buf, sizeof(buf),
                          "price impact           %16.10g\ninformed profit        %16.10g\n"
                          "makers profit (total)  %16.10g\nnoise profit           %16.10g\n"
                          "price autocorrelation  %16.10g\n",
                          t.price_impact, t.informed_profit, t.makers_profit_total, t.noise_profit,
                          t.autocorr);
            text += buf;
            emit(text, out_path);
        }
        return 0;
    }

    const std::vector<kdm::Regime> regimes = {
        kdm::Regime::perfect_no_disclosure(),
        kdm::Regime::perfect_disclosure(),
        kdm::Regime::imperfect_no_disclosure(m),
        kdm::Regime::imperfect_disclosure(m),
    };
    std::vector<kdm::TheoreticalOutcomes> outcomes;
    for (const auto& r : regimes) outcomes.push_back(kdm::theoretical_outcomes(r, sigma_v, sigma_u));

    if (format == "json") {
        Json j;
        j["params"] = {{"M", m}, {"sigma_v", sigma_v}, {"sigma_u", sigma_u}};
        Json regs;
        for (std::size_t i = 0; i < regimes.size(); ++i)
            regs[regimes[i].name()] = kdm::to_json(outcomes[i]);
        j["regimes"] = regs;
        emit_json(j, out_path);
        return 0;
    }

    const char* row_names[] = {"price impact", "informed profit", "makers profit (total)",
                               "noise profit", "price autocorrelation"};
    auto row_value = [&](const kdm::TheoreticalOutcomes& t, int r) {
        switch (r) {
            case 0: return t.price_impact;
            case 1: return t.informed_profit;
            case 2: return t.makers_profit_total;
            case 3: return t.noise_profit;
            default: return t.autocorr;
        }
    };
    std::string text;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "Equilibrium outcomes at M = %d, sigma_v = %g, sigma_u = %g\n\n",
                  m, sigma_v, sigma_u);
    text += buf;
    std::snprintf(buf, sizeof(buf), "%-24s %16s %16s %16s %16s\n", "", "perfect/no-disc",
                  "perfect/disc", "imperfect/no-disc", "imperfect/disc");
    text += buf;
    for (int r = 0; r < 5; ++r) {
        std::snprintf(buf, sizeof(buf), "%-24s %16.10g %16.10g %16.10g %16.10g\n", row_names[r],
                      row_value(outcomes[0], r), row_value(outcomes[1], r), row_value(outcomes[2], r),
                      row_value(outcomes[3], r));
        text += buf;
    }
    emit(text, out_path);
    return 0;
}

// ------------------------------------------------------------- simulate ----

int cmd_simulate(const kdm::MarketParams& params, const kdm::SimConfig& cfg,
                 const std::string& format, const std::string& out_path,
                 const std::string& dump_path) {
    const kdm::EquilibriumSolution eq = kdm::solve_closed_form(params);
    const kdm::TheoreticalOutcomes theory =
        kdm::theoretical_outcomes(kdm::Regime::imperfect_disclosure(params.n_makers),
                                  params.sigma_v, params.sigma_u);

    const kdm::ProfitEstimates profits = kdm::estimate_profits(params, eq, cfg);
    const std::vector<kdm::McEstimate> sigma_hat = kdm::estimate_posterior_variance(params, eq, cfg);
    const bool have_moments = params.n_rounds >= 3;
    kdm::PriceMomentEstimates moments;
    if (have_moments) moments = kdm::estimate_price_moments(params, eq, cfg);

    const double m = static_cast<double>(params.n_makers);
    const double var_dp_theory =
        (m - 1.0) / (m - 2.0) * params.sigma_v * params.sigma_v * params.dt();
    const double cov_dp_theory =
        -params.sigma_v * params.sigma_v * params.dt() / (2.0 * (m - 2.0));

    auto z_of = [](const kdm::McEstimate& e, double target) {
        return e.has_std_err() ? (e.mean - target) / e.std_err
                               : std::numeric_limits<double>::quiet_NaN();
    };

    if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw std::runtime_error("cannot open for writing: " + dump_path);
        dump << "path,round,dx,du,dz,dy,price,vbar\n";
        char buf[256];
        for (std::int64_t p = 0; p < cfg.n_paths; ++p) {
            const kdm::PathRecord rec =
                kdm::simulate_path(params, eq, cfg.seed, static_cast<std::uint64_t>(p),
                                   cfg.antithetic);
            for (int n = 0; n < params.n_rounds; ++n) {
                std::snprintf(buf, sizeof(buf),
                              "%lld,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                              static_cast<long long>(p), n + 1, rec.dx[n], rec.du[n], rec.dz[n],
                              rec.dy_per_maker[n], rec.prices[n], rec.vbar[n + 1]);
                dump << buf;
            }
        }
    }

    Json estimates;
    estimates["pi_I"] = kdm::to_json(profits.pi_informed);
    estimates["pi_M_total"] = kdm::to_json(profits.pi_makers_total);
    estimates["pi_N"] = kdm::to_json(profits.pi_noise);
    if (have_moments) {
        estimates["var_dp"] = kdm::to_json(moments.var_dp);
        estimates["cov_dp"] = kdm::to_json(moments.cov_dp);
        estimates["autocorr"] = kdm::to_json(moments.autocorr);
    }
    Json sigma_arr = Json::array();
    for (const auto& e : sigma_hat) sigma_arr.push_back(kdm::to_json(e));
    estimates["Sigma"] = sigma_arr;

    Json theory_j;
    theory_j["pi_I"] = theory.informed_profit;
    theory_j["pi_M_total"] = theory.makers_profit_total;
    theory_j["pi_N"] = theory.noise_profit;
    if (have_moments) {
        theory_j["var_dp"] = var_dp_theory;
        theory_j["cov_dp"] = cov_dp_theory;
        theory_j["autocorr"] = theory.autocorr;
    }
    Json sigma_theory = Json::array();
    for (int n = 0; n <= params.n_rounds; ++n) sigma_theory.push_back(eq.sigma_path[n]);
    theory_j["Sigma"] = sigma_theory;

    Json z;
    z["pi_I"] = z_of(profits.pi_informed, theory.informed_profit);
    z["pi_M_total"] = z_of(profits.pi_makers_total, theory.makers_profit_total);
    z["pi_N"] = z_of(profits.pi_noise, theory.noise_profit);
    if (have_moments) {
        z["var_dp"] = z_of(moments.var_dp, var_dp_theory);
        z["cov_dp"] = z_of(moments.cov_dp, cov_dp_theory);
        z["autocorr"] = z_of(moments.autocorr, theory.autocorr);
    }

    Json j;
    j["params"] = kdm::to_json(params);
    j["eq_hash"] = kdm::equilibrium_hash(eq);
    j["n_paths"] = cfg.n_paths;
    j["seed"] = cfg.seed;
    j["antithetic"] = cfg.antithetic;
    j["threads"] = cfg.n_threads;
    j["estimates"] = estimates;
    j["theory"] = theory_j;
    j["z_scores"] = z;

    if (format == "json") {
        emit_json(j, out_path);
        return 0;
    }

    std::string text = "Monte Carlo estimates (paths = " + std::to_string(cfg.n_paths) +
                       ", seed = " + std::to_string(cfg.seed) + ")\n\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-12s %14s %12s %14s %8s\n", "statistic", "estimate",
                  "std_err", "theory", "z");
    text += buf;
    auto add_row = [&](const char* name, const kdm::McEstimate& e, double target) {
        std::snprintf(buf, sizeof(buf), "%-12s %14.8g %12.4g %14.8g %8.2f\n", name, e.mean,
                      e.std_err, target, z_of(e, target));
        text += buf;
    };
    add_row("pi_I", profits.pi_informed, theory.informed_profit);
    add_row("pi_M_total", profits.pi_makers_total, theory.makers_profit_total);
    add_row("pi_N", profits.pi_noise, theory.noise_profit);
    if (have_moments) {
        add_row("var_dp", moments.var_dp, var_dp_theory);
        add_row("cov_dp", moments.cov_dp, cov_dp_theory);
        add_row("autocorr", moments.autocorr, theory.autocorr);
    }
    for (std::size_t n = 0; n < sigma_hat.size(); ++n) {
        const std::string name = "Sigma_" + std::to_string(n);
        add_row(name.c_str(), sigma_hat[n], eq.sigma_path[n]);
    }
    emit(text, out_path);
    return 0;
}

// --------------------------------------------------------------- verify ----

struct Check {
    std::string name;
    double value = 0.0;
    std::string threshold;
    bool pass = false;
};

int cmd_verify(const kdm::MarketParams& params, std::int64_t paths, std::uint64_t seed,
               const std::string& format, const std::string& out_path) {
    std::vector<Check> checks;
    auto add = [&](const std::string& name, double value, const std::string& thr, bool pass) {
        checks.push_back({name, value, thr, pass});
    };

    const kdm::EquilibriumSolution eq = kdm::solve_closed_form(params);
    const kdm::EquilibriumSolution eqb = kdm::solve_backward(params);
    const double m = static_cast<double>(params.n_makers);
    const int n_rounds = params.n_rounds;

    auto rel = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
    };

    // Cross-solver agreement.
    double oracle = 0.0;
    for (int n = 0; n < n_rounds; ++n) {
        oracle = std::max(oracle, rel(eq.beta[n], eqb.beta[n]));
        oracle = std::max(oracle, rel(eq.sigma_z2[n], eqb.sigma_z2[n]));
    }
    for (int n = 0; n <= n_rounds; ++n)
        oracle = std::max(oracle, rel(eq.sigma_path[n], eqb.sigma_path[n]));
    oracle = std::max({oracle, rel(eq.gamma, eqb.gamma), rel(eq.psi, eqb.psi),
                       rel(eq.phi, eqb.phi), rel(eq.lambda, eqb.lambda)});
    add("oracle agreement (max rel diff)", oracle, "< 1e-10", oracle < 1e-10);

    // Variance-path shape and terminal dissimulation.
    bool path_ok = eq.sigma_z2[n_rounds - 1] == 0.0 &&
                   eq.sigma_path[0] == params.sigma_v * params.sigma_v &&
                   eq.sigma_path[n_rounds] == 0.0;
    for (int n = 1; n <= n_rounds && path_ok; ++n)
        path_ok = eq.sigma_path[n] < eq.sigma_path[n - 1];
    add("variance path boundaries/monotone", path_ok ? 0.0 : 1.0, "exact", path_ok);

    add("|lambda*M*gamma - 1|", std::abs(eq.lambda * m * eq.gamma - 1.0), "< 1e-12",
        std::abs(eq.lambda * m * eq.gamma - 1.0) < 1e-12);
    add("|psi*M*gamma - 2|", std::abs(eq.psi * m * eq.gamma - 2.0), "< 1e-12",
        std::abs(eq.psi * m * eq.gamma - 2.0) < 1e-12);
    add("aggregate slope vs phi", rel(m * eq.gamma, (m - 2.0) / ((m - 1.0) * eq.phi)), "< 1e-12",
        rel(m * eq.gamma, (m - 2.0) / ((m - 1.0) * eq.phi)) < 1e-12);

    double flow = 0.0;
    for (int n = 0; n < n_rounds; ++n) {
        const double lhs = m / (m - 2.0) *
                           (eq.beta[n] * eq.beta[n] * eq.sigma_path[n] * params.dt() +
                            eq.sigma_z2[n]);
        flow = std::max(flow, rel(lhs, params.sigma_u * params.sigma_u));
    }
    add("flow identity (max rel residual)", flow, "< 1e-12", flow < 1e-12);

    double foc = 0.0;
    for (int n = 1; n <= n_rounds; ++n) {
        const kdm::FocResiduals r = kdm::foc_residuals(params, eq, n);
        foc = std::max({foc, std::abs(r.informed_slope), std::abs(r.informed_level),
                        std::abs(r.clearing)});
    }
    add("FOC residuals (max abs)", foc, "< 1e-12", foc < 1e-12);

    // Informed indifference on mixing rounds; strict optimality at the end.
    const std::vector<double> shift_mults = {-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0};
    const std::vector<double> devs = {0.5 * params.sigma_v, params.sigma_v, -2.0 * params.sigma_v};
    double indiff = 0.0;
    for (int round = 1; round < n_rounds; ++round) {
        const double order_sd =
            std::sqrt(eq.beta[round - 1] * eq.beta[round - 1] * eq.sigma_path[round - 1] *
                          params.dt() * params.dt() +
                      eq.sigma_z2[round - 1] * params.dt());
        for (double dev : devs) {
            std::vector<double> shifts;
            for (double s : shift_mults) shifts.push_back(s * order_sd);
            for (const auto& rep :
                 kdm::check_informed_indifference(params, eq, round, dev, shifts))
                indiff = std::max(indiff, std::abs(rep.delta));
        }
    }
    add("informed indifference (max |delta|, mixing rounds)", indiff, "< 1e-10", indiff < 1e-10);

    {
        const double order_sd = std::sqrt(eq.beta[n_rounds - 1] * eq.beta[n_rounds - 1] *
                                          eq.sigma_path[n_rounds - 1] * params.dt() * params.dt());
        double worst = -1.0; // most favourable deviation; must stay negative
        for (double dev : devs) {
            std::vector<double> shifts;
            for (double s : shift_mults) shifts.push_back(s * order_sd);
            for (const auto& rep :
                 kdm::check_informed_indifference(params, eq, n_rounds, dev, shifts))
                worst = std::max(worst, rep.delta);
        }
        add("terminal round optimality (max delta)", worst, "< 0", worst < 0.0);
    }

    {
        double worst = -1.0;
        for (double scale : {0.5, 0.8, 1.2, 3.0})
            worst = std::max(worst, kdm::check_maker_deviation(params, eq, scale).delta);
        add("maker slope deviation (max delta)", worst, "< 0", worst < 0.0);
        const double at_one = std::abs(kdm::check_maker_deviation(params, eq, 1.0).delta);
        add("maker deviation at scale 1", at_one, "< 1e-15", at_one < 1e-15);
    }

    {
        const kdm::SecondOrderConditions soc_end =
            kdm::second_order_conditions(params, eq, n_rounds);
        add("maker SOC", soc_end.maker, "> 0", soc_end.maker > 0.0);
        add("informed SOC (terminal)", soc_end.informed, "> 0", soc_end.informed > 0.0);
        if (n_rounds > 1) {
            double worst = 0.0;
            for (int round = 1; round < n_rounds; ++round)
                worst = std::max(worst,
                                 std::abs(kdm::second_order_conditions(params, eq, round).informed));
            // The indifference identities pin this to zero on mixing rounds.
            add("informed SOC (mixing rounds, |value|)", worst, "< 1e-12", worst < 1e-12);
        }
    }

    {
        const kdm::Prop31Report rep = kdm::check_proposition_3_1(params.n_makers);
        add("disclosure-vs-competition inequalities", rep.all_hold() ? 0.0 : 1.0, "all hold",
            rep.all_hold());
    }

    if (paths > 0) {
        kdm::SimConfig cfg;
        cfg.n_paths = paths;
        cfg.seed = seed;
        const kdm::TheoreticalOutcomes theory = kdm::theoretical_outcomes(
            kdm::Regime::imperfect_disclosure(params.n_makers), params.sigma_v, params.sigma_u);
        const kdm::ProfitEstimates profits = kdm::estimate_profits(params, eq, cfg);
        auto zval = [](const kdm::McEstimate& e, double target) {
            return std::abs(e.mean - target) / e.std_err;
        };
        const double zmax = std::max({zval(profits.pi_informed, theory.informed_profit),
                                      zval(profits.pi_makers_total, theory.makers_profit_total),
                                      zval(profits.pi_noise, theory.noise_profit)});
        add("MC profits (max |z|)", zmax, "< 4", zmax < 4.0);

        if (n_rounds >= 3) {
            const kdm::PriceMomentEstimates moments = kdm::estimate_price_moments(params, eq, cfg);
            const double z = zval(moments.autocorr, theory.autocorr);
            add("MC autocorrelation |z|", z, "< 4", z < 4.0);
        }

        const int round = std::max(1, n_rounds / 2);
        const kdm::DeviationReport mc_ind = kdm::mc_check_informed_indifference(
            params, eq, round, 0.5 * params.sigma_u, cfg);
        const double z_ind = std::abs(mc_ind.delta) / mc_ind.std_err;
        add("MC informed indifference |z|", z_ind, "< 4", z_ind < 4.0);

        const kdm::DeviationReport mc_mk = kdm::mc_check_maker_deviation(params, eq, 1.2, cfg);
        const double analytic = kdm::check_maker_deviation(params, eq, 1.2).delta;
        const double z_mk = std::abs(mc_mk.delta - analytic) / mc_mk.std_err;
        add("MC maker deviation vs analytic |z|", z_mk, "< 4", z_mk < 4.0);
    }

    bool all_pass = true;
    for (const Check& c : checks) all_pass = all_pass && c.pass;

    if (format == "json") {
        Json j;
        j["params"] = kdm::to_json(params);
        j["paths"] = paths;
        j["seed"] = seed;
        Json arr = Json::array();
        for (const Check& c : checks)
            arr.push_back({{"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"pass", c.pass}});
        j["checks"] = arr;
        j["pass"] = all_pass;
        emit_json(j, out_path);
    } else {
        std::string text = "Verification at N = " + std::to_string(params.n_rounds) +
                           ", M = " + std::to_string(params.n_makers) + ", sigma_v = " +
                           fmt(params.sigma_v) + ", sigma_u = " + fmt(params.sigma_u) + "\n\n";
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-52s %12s %10s %6s\n", "check", "value", "threshold",
                      "result");
        text += buf;
        for (const Check& c : checks) {
            std::snprintf(buf, sizeof(buf), "%-52s %12.3e %10s %6s\n", c.name.c_str(), c.value,
                          c.threshold.c_str(), c.pass ? "PASS" : "FAIL");
            text += buf;
        }
        text += all_pass ? "\nall checks passed\n" : "\nFAILURES present\n";
        emit(text, out_path);
    }
    return all_pass ? 0 : 1;
}

// ------------------------------------------------------------------ did ----

int cmd_did_generate(const kdm::DgpConfig& dgp, std::uint64_t seed, const std::string& out_path) {
    const std::vector<kdm::PanelRow> rows = kdm::generate_panel(dgp, seed);
    kdm::write_panel_csv(out_path, rows);

    Json j;
    j["stocks"] = dgp.n_stocks;
    j["days"] = dgp.n_days;
    j["event_day"] = dgp.event_day;
    j["alpha"] = dgp.alpha;
    j["beta1"] = dgp.beta1;
    j["beta2"] = dgp.beta2;
    j["beta3"] = dgp.beta3;
    j["controls_gamma"] = dgp.controls_gamma;
    j["noise_sd"] = dgp.noise_sd;
    j["cluster_rho"] = dgp.cluster_rho;
    j["model_implied"] = dgp.use_model_implied_effect;
    j["seed"] = seed;
    j["rows"] = rows.size();
    j["out"] = out_path;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_did_fit(const std::string& csv_in, long long event_day, const std::string& format,
                const std::string& out_path) {
    const kdm::IngestResult ingest = kdm::ingest_csv(csv_in, event_day, &std::cerr);
    std::cerr << "did-fit: csv-in=" << csv_in << " event-day=" << event_day << "\n";
    std::cerr << "ingested " << ingest.stats.rows_kept << "/" << ingest.stats.rows_read
              << " rows (" << ingest.stats.total_dropped() << " dropped)\n";
    const kdm::RegressionResult res = kdm::fit_did(ingest.rows);

    if (format == "json") {
        emit_json(kdm::to_json(res), out_path);
        return 0;
    }

    std::string text = "log(Spread) on disclosure and competition\n\n";
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-16s %12s %12s %12s %12s\n", "", "Coefficient", "Std. Error",
                  "t-statistic", "p-value");
    text += buf;
    for (int j = 0; j < kdm::kDidCoefCount; ++j) {
        std::snprintf(buf, sizeof(buf), "%-16s %12.4f %12.4f %12.2f %12.4g\n",
                      kdm::kDidCoefNames[j], res.coef[j], res.cluster_se[j], res.t_stat[j],
                      res.p_value[j]);
        text += buf;
    }
    std::snprintf(buf, sizeof(buf), "\nObservations %lld   Clusters %d   R2 %.4f\n",
                  static_cast<long long>(res.n_obs), res.n_clusters, res.r2);
    text += buf;
    emit(text, out_path);
    return 0;
}

int cmd_did_effect(double beta1, double beta3, const std::vector<double>& mmcnts,
                   const std::string& format, const std::string& out_path) {
    kdm::RegressionResult synthetic;
    synthetic.coef[kdm::RegressionResult::index_of("post")] = beta1;
    synthetic.coef[kdm::RegressionResult::index_of("post_x_log_mm")] = beta3;

    if (format == "csv") {
        std::string text = "mmcnt,effect_log,pct_change\n";
        char buf[128];
        for (double mm : mmcnts) {
            const kdm::TotalEffect eff = kdm::total_effect(synthetic, mm);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", mm, eff.effect_log,
                          eff.pct_change);
            text += buf;
        }
        emit(text, out_path);
        return 0;
    }

    Json arr = Json::array();
    for (double mm : mmcnts) {
        const kdm::TotalEffect eff = kdm::total_effect(synthetic, mm);
        arr.push_back({{"mmcnt", mm}, {"effect_log", eff.effect_log},
                       {"pct_change", eff.pct_change}});
    }
    Json j;
    j["beta1"] = beta1;
    j["beta3"] = beta3;
    j["effects"] = arr;
    emit_json(j, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for a multi-round disclosed-trading market with "
                 "imperfectly competitive market makers"};
    app.require_subcommand(1);

    kdm::MarketParams params;
    kdm::SimConfig sim;
    std::string format = "table";
    std::string out_path;

    auto add_market_flags = [&](CLI::App* sub, int default_n) {
        params.n_rounds = default_n;
        sub->add_option("--N", params.n_rounds, "number of trading rounds")
            ->capture_default_str();
        sub->add_option("--M", params.n_makers, "number of market makers (must be > 2)")
            ->capture_default_str();
        sub->add_option("--sigma-v", params.sigma_v, "fundamental standard deviation")
            ->capture_default_str();
        sub->add_option("--sigma-u", params.sigma_u, "noise-flow standard deviation")
            ->capture_default_str();
    };

    // solve
    bool backward = false;
    auto* solve = app.add_subcommand("solve", "print the equilibrium solution as JSON");
    add_market_flags(solve, 50);
    solve->add_flag("--backward", backward, "solve by backward induction instead of closed form");
    solve->add_option("--out", out_path, "write output to a file instead of stdout");

    // simulate
    std::string dump_path;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates vs theory");
    add_market_flags(simulate, 50);
    simulate->add_option("--paths", sim.n_paths, "number of simulated paths")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    simulate->add_flag("--antithetic", sim.antithetic, "pair paths with negated draws");
    simulate->add_option("--threads", sim.n_threads, "worker threads (results identical)")
        ->capture_default_str();
    simulate->add_option("--format", format, "output format: json|table")->capture_default_str();
    simulate->add_option("--out", out_path, "write output to a file");
    simulate->add_option("--dump-paths", dump_path, "write a per-path CSV dump to this file");

    // verify
    std::int64_t verify_paths = 0;
    auto* verify = app.add_subcommand("verify", "equilibrium identity and optimality checks");
    add_market_flags(verify, 10);
    verify->add_option("--paths", verify_paths,
                       "also run Monte Carlo cross-checks with this many paths (0 = skip)")
        ->capture_default_str();
    verify->add_option("--seed", sim.seed, "random seed for the cross-checks")
        ->capture_default_str();
    verify->add_option("--format", format, "output format: json|table")->capture_default_str();
    verify->add_option("--out", out_path, "write output to a file");

    // compare
    std::string regime_name = "all";
    auto* compare = app.add_subcommand("compare", "closed-form outcomes across market structures");
    compare->add_option("--M", params.n_makers, "number of market makers")->capture_default_str();
    compare->add_option("--regime", regime_name,
                        "restrict to one market structure (default: all four)")
        ->capture_default_str();
    compare->add_option("--sigma-v", params.sigma_v, "fundamental standard deviation")
        ->capture_default_str();
    compare->add_option("--sigma-u", params.sigma_u, "noise-flow standard deviation")
        ->capture_default_str();
    compare->add_option("--format", format, "output format: json|table")->capture_default_str();
    compare->add_option("--out", out_path, "write output to a file");

    // did-generate
    kdm::DgpConfig dgp;
    std::uint64_t did_seed = 42;
    auto* did_gen = app.add_subcommand("did-generate", "write a synthetic daily panel as CSV");
    did_gen->add_option("--stocks", dgp.n_stocks, "number of stocks")->capture_default_str();
    did_gen->add_option("--days", dgp.n_days, "number of trading days")->capture_default_str();
    did_gen->add_option("--event-day", dgp.event_day, "first post-event day")
        ->capture_default_str();
    did_gen->add_option("--alpha", dgp.alpha, "planted intercept")->capture_default_str();
    did_gen->add_option("--beta1", dgp.beta1, "planted post coefficient")->capture_default_str();
    did_gen->add_option("--beta2", dgp.beta2, "planted log(1+mmcnt) coefficient")
        ->capture_default_str();
    did_gen->add_option("--beta3", dgp.beta3, "planted interaction coefficient")
        ->capture_default_str();
    std::vector<double> gammas;
    did_gen->add_option("--gamma", gammas, "planted control coefficients (4 values)")
        ->expected(4);
    did_gen->add_option("--noise-sd", dgp.noise_sd, "error standard deviation")
        ->capture_default_str();
    did_gen->add_option("--rho", dgp.cluster_rho, "within-stock error correlation")
        ->capture_default_str();
    bool model_implied = false;
    did_gen->add_flag("--model-implied", model_implied,
                      "replace the planted post effect by the theory-implied one");
    did_gen->add_option("--seed", did_seed, "random seed")->capture_default_str();
    did_gen->add_option("--out", out_path, "output CSV path")->required();

    // did-fit
    std::string csv_in;
    long long fit_event_day = 0;
    auto* did_fit = app.add_subcommand("did-fit", "fit the spread regression on a CSV panel");
    did_fit->add_option("--csv-in", csv_in, "input CSV (CRSP-like layout)")->required();
    did_fit->add_option("--event-day", fit_event_day, "dates >= this value count as post")
        ->required();
    did_fit->add_option("--format", format, "output format: json|table")->capture_default_str();
    did_fit->add_option("--out", out_path, "write output to a file");

    // did-effect
    double eff_beta1 = -0.374, eff_beta3 = 0.105;
    std::vector<double> eff_mmcnt;
    auto* did_eff = app.add_subcommand("did-effect", "total log-spread effect at given maker counts");
    did_eff->add_option("--beta1", eff_beta1, "post coefficient")->capture_default_str();
    did_eff->add_option("--beta3", eff_beta3, "interaction coefficient")->capture_default_str();
    did_eff->add_option("--mmcnt", eff_mmcnt, "maker count(s) to evaluate")->required();
    did_eff->add_option("--format", format, "output format: json|csv")->capture_default_str();
    did_eff->add_option("--out", out_path, "write output to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(params, backward, out_path);
        if (simulate->parsed()) return cmd_simulate(params, sim, format, out_path, dump_path);
        if (verify->parsed()) return cmd_verify(params, verify_paths, sim.seed, format, out_path);
        if (compare->parsed())
            return cmd_compare(params.n_makers, params.sigma_v, params.sigma_u, regime_name,
                               format, out_path);
        if (did_gen->parsed()) {
            if (!gammas.empty())
                for (int i = 0; i < 4; ++i) dgp.controls_gamma[i] = gammas[i];
            dgp.use_model_implied_effect = model_implied;
            return cmd_did_generate(dgp, did_seed, out_path);
        }
        if (did_fit->parsed()) return cmd_did_fit(csv_in, fit_event_day, format, out_path);
        if (did_eff->parsed())
            return cmd_did_effect(eff_beta1, eff_beta3, eff_mmcnt, format, out_path);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
