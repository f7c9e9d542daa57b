#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kdm/csv_ingest.hpp"
#include "kdm/panel.hpp"
#include "kdm/regression.hpp"
#include "testkit.hpp"

using namespace kdm;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = "/tmp/kdm_" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* kHeader = "stock_id,date,bid,ask,price,volume,mktcap,mmcnt,volatility\n";

void test_spread_arithmetic() {
    SECTION("spread from quotes");
    const std::string path = write_temp("spread.csv", std::string(kHeader) +
        "1,100,9.9,10.1,10.0,1000,50,4,0.03\n"
        "1,101,9.9,10.1,10.0,1000,50,4,0.03\n");
    const IngestResult res = ingest_csv(path, 101);
    CHECK(res.rows.size() == 2);
    CHECK_CLOSE(res.rows[0].spread, 2.0, 1e-12);
    CHECK(res.rows[0].post == 0);
    CHECK(res.rows[1].post == 1);
    CHECK_CLOSE(res.rows[0].inv_price, 0.1, 1e-15);
    CHECK_CLOSE(res.rows[0].mmcnt_bar, 4.0, 1e-15);
}

void test_drop_rules() {
    SECTION("row filters and drop counts");
    std::ostringstream warn;
    const std::string path = write_temp("drops.csv", std::string(kHeader) +
        "1,1,9.9,10.1,10.0,1000,50,4,0.03\n"   // kept
        "1,2,10.0,10.0,10.0,1000,50,4,0.03\n"  // bid == ask -> zero spread
        "1,3,10.2,10.1,10.0,1000,50,4,0.03\n"  // bid > ask
        "1,4,-9.9,10.1,10.0,1000,50,4,0.03\n"  // nonpositive bid
        "1,5,9.9,10.1,10.0,0,50,4,0.03\n"      // nonpositive volume
        "1,6,9.9,10.1,10.0,1000,50,4,bad\n"    // non-numeric volatility
        "1,7,9.9,10.1,10.0,1000,50,,0.03\n"    // empty mmcnt
        "1,8,9.9,10.1,10.0,1000,50,4,0.03\n"); // kept
    const IngestResult res = ingest_csv(path, 100, &warn);
    CHECK(res.stats.rows_read == 8);
    CHECK(res.stats.rows_kept == 2);
    CHECK(res.rows.size() == 2);
    CHECK(res.stats.dropped_zero_spread == 1);
    CHECK(res.stats.dropped_bid_above_ask == 1);
    CHECK(res.stats.dropped_nonpositive == 2);
    CHECK(res.stats.dropped_non_numeric == 2);
    CHECK(res.stats.total_dropped() == 6);
    CHECK(warn.str().find("bid > ask") != std::string::npos);
}

void test_missing_columns() {
    SECTION("header validation");
    const std::string path =
        write_temp("missing.csv", "stock_id,date,bid,ask,price,volume,mktcap\n");
    CHECK_THROWS(ingest_csv(path, 0), std::runtime_error);
    try {
        ingest_csv(path, 0);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("mmcnt") != std::string::npos);
    }
    // mmcnt present but neither ret nor volatility
    const std::string path2 =
        write_temp("missing2.csv", "stock_id,date,bid,ask,price,volume,mktcap,mmcnt\n");
    CHECK_THROWS(ingest_csv(path2, 0), std::runtime_error);
    CHECK_THROWS(ingest_csv("/tmp/kdm_does_not_exist.csv", 0), std::runtime_error);
}

void test_volatility_from_returns() {
    SECTION("rolling volatility needs a full 20-return window");
    std::ostringstream csv;
    csv << "stock_id,date,bid,ask,price,volume,mktcap,mmcnt,ret\n";
    // 25 days; returns alternate +1% / -1%
    for (int d = 1; d <= 25; ++d)
        csv << "7," << d << ",9.9,10.1,10.0,1000,50,4," << (d % 2 ? 0.01 : -0.01) << "\n";
    const std::string path = write_temp("vol.csv", csv.str());
    const IngestResult res = ingest_csv(path, 30);
    // first 19 rows lack a complete window
    CHECK(res.stats.dropped_short_window == 19);
    CHECK(res.rows.size() == 6);
    CHECK(res.rows.front().date_index == 20);
    // SD of ten +0.01 and ten -0.01 values
    const double expected = std::sqrt(20.0 / 19.0) * 0.01;
    for (const PanelRow& r : res.rows) CHECK_CLOSE(r.volatility, expected, 1e-12);

    // only 15 prior days of returns: every row dropped
    std::ostringstream small;
    small << "stock_id,date,bid,ask,price,volume,mktcap,mmcnt,ret\n";
    for (int d = 1; d <= 16; ++d)
        small << "7," << d << ",9.9,10.1,10.0,1000,50,4,0.01\n";
    const IngestResult res2 = ingest_csv(write_temp("vol15.csv", small.str()), 30);
    CHECK(res2.rows.empty());
    CHECK(res2.stats.dropped_short_window == 16);
}

void test_mmcnt_averaging() {
    SECTION("maker count averaged over the stock's full sample");
    const std::string path = write_temp("mm.csv", std::string(kHeader) +
        "1,1,9.9,10.1,10.0,1000,50,3,0.03\n"
        "1,2,10.0,10.0,10.0,1000,50,5,0.03\n"  // dropped row still counts toward the mean
        "1,3,9.9,10.1,10.0,1000,50,4,0.03\n"
        "2,1,9.9,10.1,10.0,1000,50,18,0.03\n");
    const IngestResult res = ingest_csv(path, 10);
    CHECK(res.rows.size() == 3);
    for (const PanelRow& r : res.rows)
        if (r.stock_id == 1) CHECK_CLOSE(r.mmcnt_bar, 4.0, 1e-15);
    CHECK_CLOSE(res.rows.back().mmcnt_bar, 18.0, 1e-15);
}

void test_roundtrip_through_csv() {
    SECTION("generate -> write -> ingest -> fit roundtrip");
    DgpConfig dgp;
    dgp.n_stocks = 40;
    dgp.n_days = 30;
    dgp.event_day = 15;
    dgp.noise_sd = 0.0;
    const std::vector<PanelRow> rows = generate_panel(dgp, 9);
    const std::string path = "/tmp/kdm_roundtrip.csv";
    write_panel_csv(path, rows);
    const IngestResult back = ingest_csv(path, dgp.event_day);
    CHECK(back.rows.size() == rows.size());
    CHECK(back.stats.total_dropped() == 0);

    const RegressionResult direct = fit_did(rows);
    const RegressionResult via_csv = fit_did(back.rows);
    for (int j = 0; j < kDidCoefCount; ++j) CHECK_CLOSE(via_csv.coef[j], direct.coef[j], 1e-6);
    CHECK_CLOSE(via_csv.coef_named("post"), dgp.beta1, 1e-6);

    // spot-check the reconstruction: spread and post survive the roundtrip
    // (12 significant digits in the file, a couple lost to the quote math)
    for (std::size_t i = 0; i < rows.size(); i += 217) {
        CHECK_REL(back.rows[i].spread, rows[i].spread, 1e-8);
        CHECK(back.rows[i].post == rows[i].post);
        CHECK_REL(back.rows[i].mmcnt_bar, rows[i].mmcnt_bar, 1e-8);
    }
}

} // namespace

int main() {
    test_spread_arithmetic();
    test_drop_rules();
    test_missing_columns();
    test_volatility_from_returns();
    test_mmcnt_averaging();
    test_roundtrip_through_csv();
    return testkit::summary("test_csv");
}
