#include "goliath/bandwidth.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/special.hpp"
#include "goliath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace goliath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr std::size_t kCoarseGrid = 33;
constexpr double kGoldenTolerance = 1e-3; // in log h
constexpr std::size_t kBinomialGrid = 50;

double degenerate_bandwidth(std::span<const double> sample) {
    return 1e-6 * (1.0 + std::abs(stats::mean(sample)));
}

bool is_constant(std::span<const double> sample) {
    return std::all_of(sample.begin(), sample.end(), [&](double v) { return v == sample.front(); });
}

// Closed-form LSCV for the shape-1+t/h Gamma family on t >= 0.
double lscv_gamma(std::span<const double> t, double h) {
    const std::size_t n = t.size();
    std::vector<double> shape(n);
    std::vector<double> log_norm(n); // log Γ(k) + k log h
    const double log_h = std::log(h);
    for (std::size_t i = 0; i < n; ++i) {
        shape[i] = 1.0 + t[i] / h;
        log_norm[i] = special::log_gamma(shape[i]) + shape[i] * log_h;
    }
    const double log_half_h = std::log(0.5 * h);
    double integral = 0.0;
    double loo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // ∫ K_i K_i
        {
            const double s = 2.0 * shape[i];
            integral += std::exp(special::log_gamma(s - 1.0) + (s - 1.0) * log_half_h - 2.0 * log_norm[i]);
        }
        const double log_t = t[i] > 0.0 ? std::log(t[i]) : -kInf;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (j > i) {
                const double s = shape[i] + shape[j];
                integral += 2.0 * std::exp(special::log_gamma(s - 1.0) + (s - 1.0) * log_half_h -
                                           log_norm[i] - log_norm[j]);
            }
            // K(t_i; centre t_j)
            if (t[i] == 0.0) {
                if (shape[j] == 1.0) loo += 1.0 / h;
            } else {
                loo += std::exp((shape[j] - 1.0) * log_t - t[i] / h - log_norm[j]);
            }
        }
    }
    const auto nd = static_cast<double>(n);
    return integral / (nd * nd) - 2.0 * loo / (nd * (nd - 1.0));
}

double lscv_beta(std::span<const double> x, double h) {
    const std::size_t n = x.size();
    std::vector<double> a(n);
    std::vector<double> b(n);
    std::vector<double> lb(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = x[i] / h + 1.0;
        b[i] = (1.0 - x[i]) / h + 1.0;
        lb[i] = special::log_beta(a[i], b[i]);
    }
    // For every pair, (a_i + a_j - 1) + (b_i + b_j - 1) = 2/h + 2.
    const double lg_total = special::log_gamma(2.0 / h + 2.0);
    double integral = 0.0;
    double loo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = x[i] > 0.0 ? std::log(x[i]) : -kInf;
        const double l1x = x[i] < 1.0 ? std::log1p(-x[i]) : -kInf;
        for (std::size_t j = i; j < n; ++j) {
            const double pair = std::exp(special::log_gamma(a[i] + a[j] - 1.0) +
                                         special::log_gamma(b[i] + b[j] - 1.0) - lg_total - lb[i] -
                                         lb[j]);
            integral += (j == i ? 1.0 : 2.0) * pair;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double log_k;
            if (x[i] == 0.0) log_k = a[j] == 1.0 ? -lb[j] : -kInf;
            else if (x[i] == 1.0) log_k = b[j] == 1.0 ? -lb[j] : -kInf;
            else log_k = (a[j] - 1.0) * lx + (b[j] - 1.0) * l1x - lb[j];
            loo += std::exp(log_k);
        }
    }
    const auto nd = static_cast<double>(n);
    return integral / (nd * nd) - 2.0 * loo / (nd * (nd - 1.0));
}

double lscv_truncated_gaussian(std::span<const double> x, double lo, double hi, double h) {
    const std::size_t n = x.size();
    std::vector<double> inv_mass(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double za = (lo - x[i]) / h;
        const double zb = (hi - x[i]) / h;
        inv_mass[i] = 1.0 / (special::normal_cdf(zb) - special::normal_cdf(za));
    }
    const double h2 = kSqrt2 * h;
    const double half = h / kSqrt2;
    double integral = 0.0;
    double loo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double m = 0.5 * (x[i] + x[j]);
            const double mass = special::normal_cdf((hi - m) / half) - special::normal_cdf((lo - m) / half);
            const double pair =
                inv_mass[i] * inv_mass[j] * special::normal_pdf((x[i] - x[j]) / h2) / h2 * mass;
            integral += (j == i ? 1.0 : 2.0) * pair;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            loo += inv_mass[j] * special::normal_pdf((x[i] - x[j]) / h) / h;
        }
    }
    const auto nd = static_cast<double>(n);
    return integral / (nd * nd) - 2.0 * loo / (nd * (nd - 1.0));
}

double lscv_gaussian(std::span<const double> x, double h) {
    const std::size_t n = x.size();
    const double h2 = kSqrt2 * h;
    double integral = 0.0;
    double loo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            integral += (j == i ? 1.0 : 2.0) * special::normal_pdf((x[i] - x[j]) / h2) / h2;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) loo += special::normal_pdf((x[i] - x[j]) / h) / h;
        }
    }
    const auto nd = static_cast<double>(n);
    return integral / (nd * nd) - 2.0 * loo / (nd * (nd - 1.0));
}

// Evenly spaced order statistics.
std::vector<double> thin(std::span<const double> sample, std::size_t m) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(m);
    const double step = static_cast<double>(sorted.size()) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = sorted[static_cast<std::size_t>((static_cast<double>(i) + 0.5) * step)];
    }
    return out;
}

// Asymptotic rate of the optimal bandwidth: associated kernels (Gamma, Beta)
// have variance proportional to h, so their h shrinks like n^(-2/5).
double bandwidth_rate(KernelFamily family) {
    switch (family) {
    case KernelFamily::Gamma:
    case KernelFamily::NegativeGamma:
    case KernelFamily::Beta01: return 0.4;
    default: return 0.2;
    }
}

double minimize_lscv(const KernelKind& kind, std::span<const double> sample) {
    const auto [lo_it, hi_it] = std::minmax_element(sample.begin(), sample.end());
    const double range = *hi_it - *lo_it;
    const double log_lo = std::log(1e-4 * range);
    const double log_hi = std::log(range);
    auto score = [&](double log_h) { return lscv_score(kind, sample, std::exp(log_h)); };

    // Coarse scan to locate the basin of the global minimum.
    std::vector<double> grid(kCoarseGrid);
    std::vector<double> values(kCoarseGrid);
    std::size_t best = 0;
    for (std::size_t i = 0; i < kCoarseGrid; ++i) {
        grid[i] = log_lo + (log_hi - log_lo) * static_cast<double>(i) / static_cast<double>(kCoarseGrid - 1);
        values[i] = score(grid[i]);
        if (values[i] < values[best]) best = i;
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, kCoarseGrid - 1)];

    // Golden-section search inside the bracket.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = score(c);
    double fd = score(d);
    while (b - a > kGoldenTolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
        }
    }
    double log_h = fc < fd ? c : d;
    if (std::min(fc, fd) > values[best]) log_h = grid[best];
    return std::exp(log_h);
}

double binomial_lcv_bandwidth(std::span<const double> sample) {
    double best_h = 1.0 / static_cast<double>(kBinomialGrid + 1);
    double best_score = -kInf;
    for (std::size_t k = 1; k <= kBinomialGrid; ++k) {
        const double h = static_cast<double>(k) / static_cast<double>(kBinomialGrid + 1);
        const double s = binomial_lcv_score(sample, h);
        if (s > best_score) {
            best_score = s;
            best_h = h;
        }
    }
    return best_h;
}

void require_in_support(const KernelKind& kind, std::span<const double> sample) {
    for (double v : sample) {
        const bool ok = kind.family == KernelFamily::Binomial ? (v >= 0.0 && std::floor(v) == v)
                                                              : kind.in_support(v);
        if (!ok) {
            throw std::domain_error("sample value " + std::to_string(v) + " is outside the support of " +
                                    kind.name());
        }
    }
}

} // namespace

double lscv_score(const KernelKind& kind, std::span<const double> sample, double h) {
    if (sample.size() < 2) throw std::invalid_argument("lscv_score: need at least 2 points");
    if (!(h > 0.0)) throw std::invalid_argument("lscv_score: bandwidth must be positive");
    switch (kind.family) {
    case KernelFamily::Gaussian: return lscv_gaussian(sample, h);
    case KernelFamily::Gamma: {
        std::vector<double> t(sample.size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = sample[i] - kind.lower;
        return lscv_gamma(t, h);
    }
    case KernelFamily::NegativeGamma: {
        std::vector<double> t(sample.size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = kind.upper - sample[i];
        return lscv_gamma(t, h);
    }
    case KernelFamily::Beta01: return lscv_beta(sample, h);
    case KernelFamily::TruncatedGaussian:
        return lscv_truncated_gaussian(sample, kind.lower, kind.upper, h);
    case KernelFamily::Binomial:
    case KernelFamily::Dirac: break;
    }
    throw std::invalid_argument("lscv_score: not defined for " + kind.name());
}

double binomial_lcv_score(std::span<const double> sample, double h) {
    if (sample.size() < 2) throw std::invalid_argument("binomial_lcv_score: need at least 2 points");
    std::map<double, std::size_t> counts;
    for (double v : sample) ++counts[v];
    const FittedKernel k(KernelKind::binomial(), h);
    const auto n = static_cast<double>(sample.size());
    double score = 0.0;
    for (const auto& [u, cu] : counts) {
        double mass = 0.0;
        for (const auto& [x, cx] : counts) mass += static_cast<double>(cx) * kernel_density(k, u, x);
        mass -= kernel_density(k, u, u);
        if (mass > 0.0) score += static_cast<double>(cu) * std::log(mass / (n - 1.0));
    }
    return score;
}

double estimate_bandwidth(const KernelKind& kind, std::span<const double> sample) {
    if (kind.family == KernelFamily::Dirac) return 0.0;
    if (sample.size() < 2) throw std::invalid_argument("estimate_bandwidth: need at least 2 points");
    require_in_support(kind, sample);
    if (is_constant(sample)) {
        warn("zero-variance sample for " + kind.name() + " kernel; using minimal bandwidth");
        const double h = degenerate_bandwidth(sample);
        return kind.family == KernelFamily::Binomial ? std::min(h, 0.5) : h;
    }
    switch (kind.family) {
    case KernelFamily::Gaussian: return stats::silverman_bandwidth(sample);
    case KernelFamily::Binomial: return binomial_lcv_bandwidth(sample);
    case KernelFamily::Gamma:
    case KernelFamily::NegativeGamma:
    case KernelFamily::Beta01:
    case KernelFamily::TruncatedGaussian: {
        if (sample.size() <= kLscvMaxSample) return minimize_lscv(kind, sample);
        const auto thinned = thin(sample, kLscvMaxSample);
        const double ratio = static_cast<double>(kLscvMaxSample) / static_cast<double>(sample.size());
        return minimize_lscv(kind, thinned) * std::pow(ratio, bandwidth_rate(kind.family));
    }
    case KernelFamily::Dirac: break;
    }
    return 0.0;
}

FittedKernel fit_kernel(const KernelKind& kind, std::span<const double> sample, double multiplier) {
    if (kind.family == KernelFamily::Dirac) return FittedKernel(kind, 0.0);
    if (!(multiplier > 0.0)) throw std::invalid_argument("fit_kernel: multiplier must be positive");
    double h = estimate_bandwidth(kind, sample) * multiplier;
    if (kind.family == KernelFamily::Binomial) h = std::min(h, 0.999);
    return FittedKernel(kind, h);
}

} // namespace goliath
