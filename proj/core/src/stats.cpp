#include "mocet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mocet/error.hpp"

namespace mocet::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 500;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::domain, "incomplete_beta: need a, b > 0 and x in [0,1]");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (std::isnan(t)) return 1.0;
    if (std::isinf(t)) return 0.0;
    if (std::isinf(df)) return std::min(1.0, 2.0 * normal_sf(std::abs(t)));
    if (!(df > 0.0)) throw Error(ErrorKind::domain, "student_t: df must be > 0");
    return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

Summary summarize(std::span<const double> values) {
    Summary s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.variance = ss / (n - 1.0);
    }
    s.std_error = std::sqrt(s.variance / n);
    return s;
}

MannWhitneyResult mann_whitney_u(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw Error(ErrorKind::precondition, "mann_whitney_u: both samples must be non-empty");
    const std::size_t nx = x.size();
    const std::size_t ny = y.size();
    const std::size_t n = nx + ny;

    std::vector<std::pair<double, bool>> pooled;  // (value, from x)
    pooled.reserve(n);
    for (double v : x) pooled.emplace_back(v, true);
    for (double v : y) pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    double rank_sum_x = 0.0;
    double tie_term = 0.0;  // sum over tie groups of t^3 - t
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t r = i; r < j; ++r) {
            if (pooled[r].second) rank_sum_x += mid_rank;
        }
        i = j;
    }

    const double dx = static_cast<double>(nx);
    const double dy = static_cast<double>(ny);
    const double dn = static_cast<double>(n);
    MannWhitneyResult result;
    result.u = rank_sum_x - dx * (dx + 1.0) / 2.0;
    result.auc = result.u / (dx * dy);

    const double mu = dx * dy / 2.0;
    const double variance = dx * dy / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
    if (!(variance > 0.0)) {
        result.z = 0.0;
        result.p_value = 1.0;
        return result;
    }
    const double sigma = std::sqrt(variance);
    result.z = (result.u - mu) / sigma;
    const double corrected = (std::abs(result.u - mu) - 0.5) / sigma;
    result.p_value = std::clamp(2.0 * normal_sf(corrected), 0.0, 1.0);
    return result;
}

WelchResult welch_t_test(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw Error(ErrorKind::precondition, "welch_t_test: both samples must be non-empty");
    const Summary sx = summarize(x);
    const Summary sy = summarize(y);
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    const double vx = sx.variance / nx;
    const double vy = sy.variance / ny;
    const double se2 = vx + vy;

    WelchResult result;
    if (!(se2 > 0.0)) {
        const bool same = sx.mean == sy.mean;
        result.t = same ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), sx.mean - sy.mean);
        result.df = nx + ny - 2.0;
        result.p_value = same ? 1.0 : 0.0;
        return result;
    }
    result.t = (sx.mean - sy.mean) / std::sqrt(se2);
    // A single-observation group has no variance estimate; it adds nothing to the df denominator.
    double denom = 0.0;
    if (x.size() > 1) denom += vx * vx / (nx - 1.0);
    if (y.size() > 1) denom += vy * vy / (ny - 1.0);
    result.df = denom > 0.0 ? se2 * se2 / denom : std::numeric_limits<double>::infinity();
    result.p_value = student_t_two_sided(result.t, result.df);
    return result;
}

}  // namespace mocet::stats
