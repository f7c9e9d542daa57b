#include "kdm/csv_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace kdm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim spaces and a trailing CR
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> parse_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

struct RawRow {
    long long date = 0;
    double bid = 0, ask = 0, price = 0, volume = 0, mktcap = 0, mmcnt = 0;
    double ret = 0, volatility = 0;
    bool has_ret = false, has_volatility = false;
};

double sample_sd(const double* x, int n) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += x[i];
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) ss += (x[i] - mean) * (x[i] - mean);
    return std::sqrt(ss / (n - 1));
}

} // namespace

IngestResult ingest_csv(const std::string& path, long long event_date, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + path);

    const std::vector<std::string> header = split_csv_line(line);
    auto col = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int c_stock = col("stock_id"), c_date = col("date"), c_bid = col("bid"),
              c_ask = col("ask"), c_price = col("price"), c_volume = col("volume"),
              c_mktcap = col("mktcap"), c_mmcnt = col("mmcnt");
    const int c_ret = col("ret"), c_vol = col("volatility");

    std::string missing;
    auto need = [&](int c, const char* name) {
        if (c < 0) missing += missing.empty() ? name : std::string(", ") + name;
    };
    need(c_stock, "stock_id");
    need(c_date, "date");
    need(c_bid, "bid");
    need(c_ask, "ask");
    need(c_price, "price");
    need(c_volume, "volume");
    need(c_mktcap, "mktcap");
    need(c_mmcnt, "mmcnt");
    if (!missing.empty()) throw std::runtime_error("CSV is missing required columns: " + missing);
    if (c_ret < 0 && c_vol < 0)
        throw std::runtime_error("CSV needs a 'ret' or a 'volatility' column");

    IngestResult result;
    IngestStats& st = result.stats;

    std::map<long long, std::vector<RawRow>> by_stock;
    struct MmAgg {
        double sum = 0.0;
        std::int64_t count = 0;
    };
    std::map<long long, MmAgg> mm_by_stock;

    const std::size_t max_col = static_cast<std::size_t>(
        std::max({c_stock, c_date, c_bid, c_ask, c_price, c_volume, c_mktcap, c_mmcnt, c_ret, c_vol}));

    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++st.rows_read;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() <= max_col) {
            ++st.dropped_non_numeric;
            continue;
        }

        const auto stock = parse_int(f[c_stock]);
        const auto date = parse_int(f[c_date]);
        const auto bid = parse_double(f[c_bid]);
        const auto ask = parse_double(f[c_ask]);
        const auto price = parse_double(f[c_price]);
        const auto volume = parse_double(f[c_volume]);
        const auto mktcap = parse_double(f[c_mktcap]);
        const auto mmcnt = parse_double(f[c_mmcnt]);
        std::optional<double> ret, vol;
        if (c_ret >= 0) ret = parse_double(f[c_ret]);
        if (c_vol >= 0) vol = parse_double(f[c_vol]);

        if (!stock || !date || !bid || !ask || !price || !volume || !mktcap || !mmcnt ||
            (c_vol >= 0 ? !vol : !ret)) {
            ++st.dropped_non_numeric;
            continue;
        }

        // Maker counts average over the stock's full sample, before the
        // spread/window filters remove any days.
        if (*mmcnt >= 1.0) {
            MmAgg& agg = mm_by_stock[*stock];
            agg.sum += *mmcnt;
            ++agg.count;
        }

        if (!(*bid > 0.0) || !(*ask > 0.0) || !(*price > 0.0) || !(*volume > 0.0) ||
            !(*mktcap > 0.0) || !(*mmcnt >= 1.0) || (vol && *vol < 0.0)) {
            ++st.dropped_nonpositive;
            continue;
        }
        if (*bid > *ask) {
            ++st.dropped_bid_above_ask;
            if (warnings)
                *warnings << "warning: dropped row with bid > ask (stock " << *stock << ", date "
                          << *date << ")\n";
            continue;
        }
        if (*bid == *ask) {
            ++st.dropped_zero_spread;
            continue;
        }

        RawRow raw;
        raw.date = *date;
        raw.bid = *bid;
        raw.ask = *ask;
        raw.price = *price;
        raw.volume = *volume;
        raw.mktcap = *mktcap;
        raw.mmcnt = *mmcnt;
        if (ret) {
            raw.ret = *ret;
            raw.has_ret = true;
        }
        if (vol) {
            raw.volatility = *vol;
            raw.has_volatility = true;
        }
        by_stock[*stock].push_back(raw);
    }

    constexpr int kVolWindow = 20;
    for (auto& [stock, raws] : by_stock) {
        std::stable_sort(raws.begin(), raws.end(),
                         [](const RawRow& a, const RawRow& b) { return a.date < b.date; });

        const auto mm_it = mm_by_stock.find(stock);
        const double mm_bar =
            mm_it != mm_by_stock.end() && mm_it->second.count > 0
                ? mm_it->second.sum / static_cast<double>(mm_it->second.count)
                : 0.0;
        if (!(mm_bar >= 1.0)) {
            st.dropped_nonpositive += static_cast<std::int64_t>(raws.size());
            continue;
        }

        std::vector<double> rets;
        rets.reserve(raws.size());
        for (std::size_t i = 0; i < raws.size(); ++i) {
            const RawRow& raw = raws[i];
            double volatility;
            if (raw.has_volatility) {
                volatility = raw.volatility;
            } else {
                // Rolling SD over the last kVolWindow returns, current day
                // included; rows without a full window are dropped.
                rets.push_back(raw.ret);
                if (static_cast<int>(rets.size()) < kVolWindow) {
                    ++st.dropped_short_window;
                    continue;
                }
                volatility = sample_sd(rets.data() + rets.size() - kVolWindow, kVolWindow);
            }

            PanelRow row;
            row.stock_id = static_cast<int>(stock);
            row.date_index = static_cast<int>(raw.date);
            row.post = raw.date >= event_date ? 1 : 0;
            const double midpoint = 0.5 * (raw.bid + raw.ask);
            row.spread = (raw.ask - raw.bid) / midpoint * 100.0;
            row.mmcnt_bar = mm_bar;
            row.mktcap = raw.mktcap;
            row.volume = raw.volume;
            row.volatility = volatility;
            row.inv_price = 1.0 / raw.price;
            result.rows.push_back(row);
            ++st.rows_kept;
        }
    }

    return result;
}

void write_panel_csv(const std::string& path, const std::vector<PanelRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);

    out << "stock_id,date,bid,ask,price,volume,mktcap,mmcnt,volatility\n";
    char buf[256];
    for (const PanelRow& r : rows) {
        const double mid = 1.0 / r.inv_price;
        const double half = 0.5 * r.spread / 100.0 * mid;
        std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      r.stock_id, r.date_index, mid - half, mid + half, mid, r.volume, r.mktcap,
                      r.mmcnt_bar, r.volatility);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace kdm
