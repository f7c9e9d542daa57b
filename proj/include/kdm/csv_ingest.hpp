#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kdm/panel.hpp"

namespace kdm {

// Ingestion of daily stock files in a CRSP-like layout. Required header
// columns: stock_id, date, bid, ask, price, volume, mktcap, mmcnt, and one
// of ret / volatility. Derived per row:
//   spread     = (ask - bid)/midpoint * 100
//   inv_price  = 1/price
//   volatility = rolling sample SD of the last 20 returns (only when the
//                ret column is used; rows without a full window are dropped)
//   mmcnt_bar  = per-stock time-series mean of mmcnt over all parsed rows
//   post       = 1 when date >= event_date
// Rows failing the positivity filters (bid, ask, price, volume, mktcap > 0,
// bid < ask, spread > 0) are dropped and counted.
struct IngestStats {
    std::int64_t rows_read = 0;
    std::int64_t rows_kept = 0;
    std::int64_t dropped_non_numeric = 0;
    std::int64_t dropped_nonpositive = 0;   // bid/ask/price/volume/mktcap <= 0
    std::int64_t dropped_bid_above_ask = 0;
    std::int64_t dropped_zero_spread = 0;   // bid == ask
    std::int64_t dropped_short_window = 0;  // fewer than 20 prior returns
    std::int64_t total_dropped() const {
        return dropped_non_numeric + dropped_nonpositive + dropped_bid_above_ask +
               dropped_zero_spread + dropped_short_window;
    }
};

struct IngestResult {
    std::vector<PanelRow> rows; // sorted by (stock_id, date)
    IngestStats stats;
};

// Throws std::runtime_error on unreadable files or a missing required
// column. Warnings (one per dropped bid>ask row) go to `warnings` when
// non-null.
IngestResult ingest_csv(const std::string& path, long long event_date,
                        std::ostream* warnings = nullptr);

// Writes a generated panel in the same CRSP-like layout, so files from the
// generator feed straight back into ingest_csv. Quotes are reconstructed
// around the midpoint 1/inv_price; mmcnt is the (constant) stock average and
// volatility is emitted directly.
void write_panel_csv(const std::string& path, const std::vector<PanelRow>& rows);

} // namespace kdm
