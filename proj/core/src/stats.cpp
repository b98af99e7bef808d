#include "goliath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace goliath::stats {

namespace {

void require_nonempty(std::span<const double> x, const char* what) {
    if (x.empty()) throw std::invalid_argument(std::string(what) + ": empty sample");
}

void require_same_size(std::span<const double> x, std::span<const double> w, const char* what) {
    if (x.size() != w.size()) {
        throw std::invalid_argument(std::string(what) + ": weights and values differ in length");
    }
}

std::vector<double> normalized(std::span<const double> w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("weights must have a positive sum");
    std::vector<double> out(w.begin(), w.end());
    for (double& v : out) v /= total;
    return out;
}

} // namespace

double mean(std::span<const double> x) {
    require_nonempty(x, "mean");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double population_variance(std::span<const double> x) {
    require_nonempty(x, "population_variance");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
    require_nonempty(sorted, "quantile");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double quantile(std::span<const double> x, double p) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, p);
}

double median(std::span<const double> x) { return quantile(x, 0.5); }

double iqr(std::span<const double> x) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
}

double skewness(std::span<const double> x) {
    require_nonempty(x, "skewness");
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    const double m = mean(s);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : s) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const auto n = static_cast<double>(s.size());
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) return 0.0;
    return m3 / std::pow(m2, 1.5);
}

double silverman_bandwidth(std::span<const double> x) {
    require_nonempty(x, "silverman_bandwidth");
    const double sd = stddev(x);
    const double robust = iqr(x) / 1.34;
    double scale = std::min(sd, robust);
    if (!(scale > 0.0)) scale = sd;
    return 1.06 * scale * std::pow(static_cast<double>(x.size()), -0.2);
}

double weighted_mean(std::span<const double> x, std::span<const double> w) {
    require_nonempty(x, "weighted_mean");
    require_same_size(x, w, "weighted_mean");
    const auto wn = normalized(w);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m += wn[i] * x[i];
    return m;
}

double weighted_stddev(std::span<const double> x, std::span<const double> w) {
    require_nonempty(x, "weighted_stddev");
    require_same_size(x, w, "weighted_stddev");
    const auto wn = normalized(w);
    double m = 0.0;
    double sum_sq_w = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m += wn[i] * x[i];
        sum_sq_w += wn[i] * wn[i];
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += wn[i] * (x[i] - m) * (x[i] - m);
    const double denom = 1.0 - sum_sq_w;
    if (!(denom > 0.0)) return 0.0;
    return std::sqrt(ss / denom);
}

double weighted_quantile(std::span<const double> x, std::span<const double> w, double p) {
    require_nonempty(x, "weighted_quantile");
    require_same_size(x, w, "weighted_quantile");
    const auto wn = normalized(w);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && a < b);
    });
    // Interpolate between the midpoints of each observation's weight mass.
    double cum = 0.0;
    double prev_mid = 0.0;
    double prev_x = x[order.front()];
    for (std::size_t r = 0; r < order.size(); ++r) {
        const double wi = wn[order[r]];
        const double mid = cum + 0.5 * wi;
        const double xi = x[order[r]];
        if (p <= mid) {
            if (r == 0 || mid == prev_mid) return xi;
            const double t = (p - prev_mid) / (mid - prev_mid);
            return prev_x + t * (xi - prev_x);
        }
        cum += wi;
        prev_mid = mid;
        prev_x = xi;
    }
    return x[order.back()];
}

double weighted_silverman_bandwidth(std::span<const double> x, std::span<const double> w) {
    const double sd = weighted_stddev(x, w);
    const double robust =
        (weighted_quantile(x, w, 0.75) - weighted_quantile(x, w, 0.25)) / 1.34;
    double scale = std::min(sd, robust);
    if (!(scale > 0.0)) scale = sd;
    const auto wn = normalized(w);
    double sum_sq = 0.0;
    for (double v : wn) sum_sq += v * v;
    const double n_eff = 1.0 / sum_sq;
    return 1.06 * scale * std::pow(n_eff, -0.2);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("pearson: need two equal-length samples of size >= 2");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t r = i; r <= j; ++r) ranks[order[r]] = avg;
        i = j + 1;
    }
    return ranks;
}

} // namespace goliath::stats
