#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "testkit.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const std::string out_path = "/tmp/kdm_cli_out.txt";
    const std::string err_path = "/tmp/kdm_cli_err.txt";
    const std::string cmd =
        std::string(KDM_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

void test_help() {
    SECTION("--help documents the interface");
    const CliResult res = run_cli("--help");
    CHECK(res.exit_code == 0);
    for (const char* cmd : {"solve", "simulate", "verify", "compare", "did-generate", "did-fit",
                            "did-effect"})
        CHECK_MSG(res.out.find(cmd) != std::string::npos, std::string("missing ") + cmd);

    const CliResult sim_help = run_cli("simulate --help");
    CHECK(sim_help.exit_code == 0);
    for (const char* flag : {"--N", "--M", "--sigma-v", "--sigma-u", "--paths", "--seed",
                             "--format", "--out"})
        CHECK_MSG(sim_help.out.find(flag) != std::string::npos, std::string("missing ") + flag);
}

void test_solve_golden() {
    SECTION("solve output matches the golden document");
    const CliResult res = run_cli("solve --N 4 --M 3");
    CHECK(res.exit_code == 0);
    const std::string golden = slurp(std::string(KDM_GOLDEN_DIR) + "/solve_n4_m3.json");
    CHECK_MSG(!golden.empty(), "golden file missing");
    CHECK_MSG(res.out == golden, "solve output drifted from the golden file");

    // schema: required keys in the pinned order
    const json j = json::parse(res.out);
    const std::vector<std::string> keys = {"params", "beta",  "sigma_z2", "gamma",
                                           "psi",    "phi",   "Sigma",    "lambda"};
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) CHECK(it.key() == keys.at(i));
    CHECK_CLOSE(j["lambda"].get<double>(), 0.8660254038, 1e-9);
    CHECK(j["beta"].size() == 4);
    CHECK(j["Sigma"].size() == 5);

    // the backward solver is exposed and agrees
    const CliResult back = run_cli("solve --N 4 --M 3 --backward");
    CHECK(back.exit_code == 0);
    const json jb = json::parse(back.out);
    CHECK_CLOSE(jb["lambda"].get<double>(), j["lambda"].get<double>(), 1e-10);
}

void test_usage_errors() {
    SECTION("usage errors exit with code 2");
    const CliResult bad_m = run_cli("solve --N 4 --M 2");
    CHECK(bad_m.exit_code == 2);
    CHECK_MSG(bad_m.err.find("M > 2") != std::string::npos, "error should cite M > 2");

    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("solve --no-such-flag 3").exit_code == 2);
    CHECK(run_cli("did-fit --csv-in /tmp/kdm_missing.csv --event-day 5").exit_code == 2);
}

void test_verify_exit_codes() {
    SECTION("verify passes on an unmodified build");
    const CliResult res = run_cli("verify --N 10 --M 5");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("PASS") != std::string::npos);
    CHECK(res.out.find("FAIL") == std::string::npos);

    const CliResult res_json = run_cli("verify --N 6 --M 3 --format json");
    CHECK(res_json.exit_code == 0);
    const json j = json::parse(res_json.out);
    CHECK(j["pass"].get<bool>());
}

void test_simulate_reproducibility() {
    SECTION("identical invocations produce identical bytes");
    const std::string args = "simulate --N 6 --M 3 --paths 2000 --seed 7 --format json";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    // a different worker count is a different resolved config, but the
    // estimates themselves must be bit-identical
    const CliResult c = run_cli("simulate --N 6 --M 3 --paths 2000 --seed 7 --format json --threads 4");
    const json ja = json::parse(a.out);
    const json jc = json::parse(c.out);
    CHECK_MSG(ja["estimates"].dump() == jc["estimates"].dump(),
              "thread count changed the estimates");

    const json j = ja;
    const std::vector<std::string> sim_keys = {"params",     "eq_hash", "n_paths",
                                               "seed",       "antithetic", "threads",
                                               "estimates",  "theory",  "z_scores"};
    std::size_t ki = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++ki)
        CHECK_MSG(it.key() == sim_keys.at(ki), "simulate schema drifted at " + it.key());
    CHECK(j["estimates"]["pi_I"].contains("mean"));
    CHECK(j["estimates"]["pi_I"].contains("std_err"));
}

void test_did_pipeline() {
    SECTION("did-generate / did-fit / did-effect roundtrip");
    const CliResult gen = run_cli(
        "did-generate --stocks 40 --days 30 --event-day 15 --noise-sd 0 --seed 3 "
        "--out /tmp/kdm_cli_panel.csv");
    CHECK(gen.exit_code == 0);

    const CliResult fit =
        run_cli("did-fit --csv-in /tmp/kdm_cli_panel.csv --event-day 15 --format json");
    CHECK(fit.exit_code == 0);
    const json j = json::parse(fit.out);
    const std::vector<std::string> fit_keys = {"coefficients", "cluster_se", "t",
                                               "p",            "r2",         "n_obs",
                                               "n_clusters"};
    std::size_t ki = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++ki)
        CHECK_MSG(it.key() == fit_keys.at(ki), "did-fit schema drifted at " + it.key());
    CHECK_CLOSE(j["coefficients"]["post"].get<double>(), -0.374, 1e-6);
    CHECK_CLOSE(j["coefficients"]["post_x_log_mm"].get<double>(), 0.105, 1e-6);
    CHECK(j["n_clusters"].get<int>() == 40);

    const CliResult eff = run_cli("did-effect --beta1 -0.374 --beta3 0.105 --mmcnt 3 --mmcnt 18");
    CHECK(eff.exit_code == 0);
    const json je = json::parse(eff.out);
    CHECK_CLOSE(je["effects"][0]["effect_log"].get<double>(), -0.22843909, 1e-7);
    CHECK_CLOSE(je["effects"][1]["effect_log"].get<double>(), -0.06483391, 1e-7);

    const CliResult eff_csv =
        run_cli("did-effect --beta1 -0.374 --beta3 0.105 --mmcnt 3 --format csv");
    CHECK(eff_csv.exit_code == 0);
    CHECK(eff_csv.out.rfind("mmcnt,effect_log,pct_change\n", 0) == 0);
}

void test_compare_output() {
    SECTION("compare prints all four market structures");
    const CliResult res = run_cli("compare --M 3");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("price impact") != std::string::npos);

    const CliResult js = run_cli("compare --M 3 --format json");
    const json j = json::parse(js.out);
    for (const char* regime : {"perfect_no_disclosure", "perfect_disclosure",
                               "imperfect_no_disclosure", "imperfect_disclosure"})
        CHECK(j["regimes"].contains(regime));

    const CliResult one = run_cli("compare --M 3 --regime imperfect-disclosure --format json");
    CHECK(one.exit_code == 0);
    const json jo = json::parse(one.out);
    CHECK_CLOSE(jo["outcomes"]["price_impact"].get<double>(), 0.8660254038, 1e-9);
    CHECK(run_cli("compare --M 3 --regime bogus").exit_code == 2);
}

void test_path_dump() {
    SECTION("per-path CSV dump");
    const CliResult res = run_cli(
        "simulate --N 3 --M 3 --paths 5 --seed 1 --format json --dump-paths /tmp/kdm_paths.csv");
    CHECK(res.exit_code == 0);
    const std::string dump = slurp("/tmp/kdm_paths.csv");
    CHECK(dump.rfind("path,round,dx,du,dz,dy,price,vbar\n", 0) == 0);
    // 5 paths x 3 rounds + header
    int lines = 0;
    for (char c : dump)
        if (c == '\n') ++lines;
    CHECK(lines == 16);
}

} // namespace

int main() {
    test_help();
    test_solve_golden();
    test_usage_errors();
    test_verify_exit_codes();
    test_simulate_reproducibility();
    test_did_pipeline();
    test_compare_output();
    test_path_dump();
    return testkit::summary("test_cli");
}
