#include "oracles.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace goliath::test {

namespace bm = boost::math;

double kernel_cdf(const FittedKernel& k, double x, double u) {
    const double h = k.h;
    const double a = k.kind.lower;
    const double b = k.kind.upper;
    switch (k.kind.family) {
    case KernelFamily::Gaussian: return bm::cdf(bm::normal(x, h), u);
    case KernelFamily::Binomial: {
        const double n = x + 1.0;
        if (u < 0.0) return 0.0;
        if (u >= n) return 1.0;
        return bm::cdf(bm::binomial(n, (x + h) / n), std::floor(u));
    }
    case KernelFamily::Gamma:
        return u <= a ? 0.0 : bm::gamma_p(1.0 + (x - a) / h, (u - a) / h);
    case KernelFamily::NegativeGamma:
        return u >= b ? 1.0 : bm::gamma_q(1.0 + (b - x) / h, (b - u) / h);
    case KernelFamily::Beta01:
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        return bm::ibeta(x / h + 1.0, (1.0 - x) / h + 1.0, u);
    case KernelFamily::TruncatedGaussian: {
        if (u <= a) return 0.0;
        if (u >= b) return 1.0;
        const bm::normal nd(x, h);
        return (bm::cdf(nd, u) - bm::cdf(nd, a)) / (bm::cdf(nd, b) - bm::cdf(nd, a));
    }
    case KernelFamily::Dirac: return u >= x ? 1.0 : 0.0;
    }
    throw std::logic_error("kernel_cdf: unknown family");
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return bm::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

std::vector<double> cumulative_cdf(const std::function<double(double)>& density, double lower,
                                   std::span<const double> sorted_points) {
    std::vector<double> out(sorted_points.size());
    double acc = 0.0;
    double prev = lower;
    for (std::size_t i = 0; i < sorted_points.size(); ++i) {
        const double x = sorted_points[i];
        if (x > prev) {
            // Gaps between neighbouring draws are tiny; a fixed rule suffices there.
            acc += x - prev < 1e-2 ? bm::quadrature::gauss_kronrod<double, 15>::integrate(density, prev, x, 0)
                                   : integrate(density, prev, x, 1e-13);
            prev = x;
        }
        out[i] = acc;
    }
    return out;
}

double ks_statistic(std::span<const double> sorted, std::span<const double> cdf_at_sorted) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf_at_sorted[i];
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    std::vector<double> f(sample.size());
    std::transform(sample.begin(), sample.end(), f.begin(), cdf);
    return ks_statistic(sample, f);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_pvalue(double d, double n_eff) {
    const double t = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    if (t < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double point_segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b) {
    double ab2 = 0.0;
    double dot = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        ab2 += (b[j] - a[j]) * (b[j] - a[j]);
        dot += (p[j] - a[j]) * (b[j] - a[j]);
    }
    const double t = ab2 > 0.0 ? std::clamp(dot / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double c = a[j] + t * (b[j] - a[j]);
        d2 += (p[j] - c) * (p[j] - c);
    }
    return std::sqrt(d2);
}

std::vector<std::vector<std::size_t>> brute_force_neighbors(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    std::vector<double> scale(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        const auto col = x.column(j);
        const double m = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : col) ss += (v - m) * (v - m);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd > 0.0) scale[j] = sd;
    }
    std::vector<std::vector<std::size_t>> out(n);
    // Column-outer accumulation, unlike the row-wise library loop.
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < n; ++m) {
                const double diff = (x(i, j) - x(m, j)) / scale[j];
                d2[i * n + m] += diff * diff;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> idx;
        for (std::size_t m = 0; m < n; ++m) {
            if (m != i) idx.push_back(m);
        }
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return d2[i * n + a] < d2[i * n + b]; });
        idx.resize(k);
        out[i] = idx;
    }
    return out;
}

Matrix five_point_plane() { return Matrix{{0.0, 0.0}, {1.0, 0.2}, {0.3, 1.1}, {1.4, 1.3}, {2.2, 0.4}}; }

} // namespace goliath::test
