#include "kdm/regression.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace kdm {

namespace {

constexpr int K = kDidCoefCount;
using Mat = std::array<double, K * K>;
using Vec = std::array<double, K>;

double& at(Mat& m, int i, int j) { return m[i * K + j]; }
double at(const Mat& m, int i, int j) { return m[i * K + j]; }

// Cholesky with a relative pivot test; a failing pivot at column j means
// column j is (numerically) a linear combination of the earlier ones.
Mat cholesky_or_throw(const Mat& a) {
    Mat l{};
    for (int j = 0; j < K; ++j) {
        double d = at(a, j, j);
        for (int k = 0; k < j; ++k) d -= at(l, j, k) * at(l, j, k);
        if (!(d > 1e-10 * std::max(at(a, j, j), 1.0)))
            throw std::invalid_argument(
                std::string("design matrix is rank deficient: column '") + kDidCoefNames[j] +
                "' is collinear with the preceding columns");
        at(l, j, j) = std::sqrt(d);
        for (int i = j + 1; i < K; ++i) {
            double s = at(a, i, j);
            for (int k = 0; k < j; ++k) s -= at(l, i, k) * at(l, j, k);
            at(l, i, j) = s / at(l, j, j);
        }
    }
    return l;
}

Vec chol_solve(const Mat& l, const Vec& b) {
    Vec y{};
    for (int i = 0; i < K; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= at(l, i, k) * y[k];
        y[i] = s / at(l, i, i);
    }
    Vec x{};
    for (int i = K - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < K; ++k) s -= at(l, k, i) * x[k];
        x[i] = s / at(l, i, i);
    }
    return x;
}

Mat chol_inverse(const Mat& l) {
    Mat inv{};
    for (int col = 0; col < K; ++col) {
        Vec e{};
        e[col] = 1.0;
        const Vec x = chol_solve(l, e);
        for (int i = 0; i < K; ++i) at(inv, i, col) = x[i];
    }
    return inv;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < K; ++i)
        for (int k = 0; k < K; ++k) {
            const double aik = at(a, i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < K; ++j) at(c, i, j) += aik * at(b, k, j);
        }
    return c;
}

Mat mat_mul_t(const Mat& a, const Mat& bt) { // a * bt^T
    Mat c{};
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            double s = 0.0;
            for (int k = 0; k < K; ++k) s += at(a, i, k) * at(bt, j, k);
            at(c, i, j) = s;
        }
    return c;
}

void design_row(const PanelRow& r, Vec& x) {
    if (!(r.spread > 0.0))
        throw std::invalid_argument("fit_did: spread must be positive for the log transform");
    if (!(r.mktcap > 0.0) || !(r.volume > 0.0))
        throw std::invalid_argument("fit_did: mktcap and volume must be positive");
    x[0] = 1.0;
    x[1] = static_cast<double>(r.post);
    x[2] = std::log1p(r.mmcnt_bar);
    x[3] = x[1] * x[2];
    x[4] = std::log(r.mktcap);
    x[5] = std::log(r.volume);
    x[6] = r.volatility;
    x[7] = r.inv_price;
}

} // namespace

int RegressionResult::index_of(const std::string& name) {
    for (int j = 0; j < K; ++j)
        if (name == kDidCoefNames[j]) return j;
    throw std::invalid_argument("unknown coefficient name: " + name);
}

RegressionResult fit_did(const std::vector<PanelRow>& rows) {
    const std::int64_t n = static_cast<std::int64_t>(rows.size());
    if (n < K + 1) throw std::invalid_argument("fit_did: need more observations than columns");

    // Column moments for standardization; centered, unit-variance columns
    // keep the normal equations well conditioned.
    std::array<double, K> mu{}, sd{};
    {
        Vec x{};
        for (const PanelRow& r : rows) {
            design_row(r, x);
            for (int j = 1; j < K; ++j) mu[j] += x[j];
        }
        for (int j = 1; j < K; ++j) mu[j] /= static_cast<double>(n);
        for (const PanelRow& r : rows) {
            design_row(r, x);
            for (int j = 1; j < K; ++j) sd[j] += (x[j] - mu[j]) * (x[j] - mu[j]);
        }
        for (int j = 1; j < K; ++j) {
            sd[j] = std::sqrt(sd[j] / static_cast<double>(n - 1));
            if (!(sd[j] > 0.0))
                throw std::invalid_argument(std::string("design matrix is rank deficient: column '") +
                                            kDidCoefNames[j] + "' is constant");
        }
        mu[0] = 0.0;
        sd[0] = 1.0;
    }

    auto standardized_row = [&](const PanelRow& r, Vec& z) {
        design_row(r, z);
        for (int j = 1; j < K; ++j) z[j] = (z[j] - mu[j]) / sd[j];
    };

    // Accumulate Z'Z and Z'y.
    Mat ztz{};
    Vec zty{};
    double y_sum = 0.0, y_sq = 0.0;
    {
        Vec z{};
        for (const PanelRow& r : rows) {
            standardized_row(r, z);
            const double y = std::log(r.spread);
            y_sum += y;
            y_sq += y * y;
            for (int i = 0; i < K; ++i) {
                zty[i] += z[i] * y;
                for (int j = i; j < K; ++j) at(ztz, i, j) += z[i] * z[j];
            }
        }
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < i; ++j) at(ztz, i, j) = at(ztz, j, i);
    }

    const Mat l = cholesky_or_throw(ztz);
    const Vec b_std = chol_solve(l, zty);
    const Mat bread = chol_inverse(l);

    // Residual pass: SSR, cluster scores, classical moments.
    double ssr = 0.0;
    std::map<int, Vec> scores; // ordered so the meat sums deterministically
    {
        Vec z{};
        for (const PanelRow& r : rows) {
            standardized_row(r, z);
            double fitted = 0.0;
            for (int j = 0; j < K; ++j) fitted += z[j] * b_std[j];
            const double e = std::log(r.spread) - fitted;
            ssr += e * e;
            Vec& s = scores[r.stock_id];
            for (int j = 0; j < K; ++j) s[j] += z[j] * e;
        }
    }

    const int n_clusters = static_cast<int>(scores.size());
    if (n_clusters < 2)
        throw std::invalid_argument("fit_did: cluster-robust inference needs at least 2 clusters");

    Mat meat{};
    for (const auto& [id, s] : scores) {
        (void)id;
        for (int i = 0; i < K; ++i)
            for (int j = 0; j < K; ++j) at(meat, i, j) += s[i] * s[j];
    }

    const double g = static_cast<double>(n_clusters);
    const double cr1 = g / (g - 1.0) * static_cast<double>(n - 1) / static_cast<double>(n - K);
    Mat v_std = mat_mul(mat_mul(bread, meat), bread);
    for (double& x : v_std) x *= cr1;

    const double s2 = ssr / static_cast<double>(n - K);
    Mat v_classical_std = bread;
    for (double& x : v_classical_std) x *= s2;

    // Undo the standardization: b = T b_std, V = T V_std T'.
    Mat t{};
    at(t, 0, 0) = 1.0;
    for (int j = 1; j < K; ++j) {
        at(t, 0, j) = -mu[j] / sd[j];
        at(t, j, j) = 1.0 / sd[j];
    }

    RegressionResult res;
    for (int i = 0; i < K; ++i) {
        double s = 0.0;
        for (int j = 0; j < K; ++j) s += at(t, i, j) * b_std[j];
        res.coef[i] = s;
    }
    const Mat v = mat_mul_t(mat_mul(t, v_std), t);
    const Mat v_classical = mat_mul_t(mat_mul(t, v_classical_std), t);
    for (int i = 0; i < K * K; ++i) res.cov[i] = v[i];

    const double dof = g - 1.0;
    for (int j = 0; j < K; ++j) {
        res.cluster_se[j] = std::sqrt(std::max(0.0, at(v, j, j)));
        res.classical_se[j] = std::sqrt(std::max(0.0, at(v_classical, j, j)));
        res.t_stat[j] = res.coef[j] / res.cluster_se[j];
        res.p_value[j] = 2.0 * (1.0 - student_t_cdf(std::abs(res.t_stat[j]), dof));
    }

    const double y_mean = y_sum / static_cast<double>(n);
    const double sst = y_sq - static_cast<double>(n) * y_mean * y_mean;
    if (sst > 1e-300) {
        res.r2 = std::clamp(1.0 - ssr / sst, 0.0, 1.0);
    } else {
        // Constant outcome: the intercept fits it exactly.
        res.r2 = 1.0;
    }
    res.n_obs = n;
    res.n_clusters = n_clusters;
    return res;
}

TotalEffect total_effect(const RegressionResult& result, double mmcnt) {
    TotalEffect eff;
    eff.effect_log = result.coef_named("post") +
                     result.coef_named("post_x_log_mm") * std::log1p(mmcnt);
    eff.pct_change = std::expm1(eff.effect_log);
    return eff;
}

namespace {

// Regularized incomplete beta via the Lentz continued fraction.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

} // namespace

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) throw std::domain_error("student_t_cdf: dof must be positive");
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * reg_inc_beta(0.5 * dof, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double dof) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("student_t_quantile: p must be in (0,1)");
    if (p < 0.5) return -student_t_quantile(1.0 - p, dof);
    if (p == 0.5) return 0.0;

    double lo = 0.0, hi = 1.0;
    while (student_t_cdf(hi, dof) < p && hi < 1e12) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, dof) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace kdm
