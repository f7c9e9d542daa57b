#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace kdm {

// Monte Carlo sample summary. std_err is the plain i.i.d. path-level
// standard error; it is NaN when fewer than two samples exist (flagged
// rather than fabricated).
struct McEstimate {
    double mean = 0.0;
    double std_err = std::numeric_limits<double>::quiet_NaN();
    std::int64_t n_paths = 0;

    bool has_std_err() const { return std::isfinite(std_err); }
};

// Welford accumulator with Chan's merge, so per-block partials combined in
// block order give the same result on any worker count.
struct McAccumulator {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const McAccumulator& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        mean += d * nb / (na + nb);
        m2 += o.m2 + d * d * na * nb / (na + nb);
        n += o.n;
    }

    double variance() const { return n >= 2 ? m2 / static_cast<double>(n - 1) : std::numeric_limits<double>::quiet_NaN(); }

    McEstimate estimate() const {
        McEstimate e;
        e.mean = mean;
        e.n_paths = n;
        if (n >= 2) e.std_err = std::sqrt(variance() / static_cast<double>(n));
        return e;
    }
};

} // namespace kdm
