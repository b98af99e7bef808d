#include "goliath/kernels.hpp"

#include "goliath/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace goliath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_count(double v) { return v >= 0.0 && std::floor(v) == v; }

void require_center(const FittedKernel& k, double x) {
    const bool ok = k.kind.family == KernelFamily::Binomial ? is_count(x) : k.kind.in_support(x);
    if (!ok) {
        throw std::domain_error("kernel centre " + std::to_string(x) + " is outside the support of " +
                                k.kind.name());
    }
}

// Density of Gamma(shape, scale) at t >= 0.
double gamma_density(double t, double shape, double scale) {
    if (t < 0.0) return 0.0;
    if (t == 0.0) {
        if (shape == 1.0) return 1.0 / scale;
        return shape < 1.0 ? kInf : 0.0;
    }
    return std::exp((shape - 1.0) * std::log(t) - t / scale - special::log_gamma(shape) -
                    shape * std::log(scale));
}

// Probability mass of N(x, h^2) on [a, b], accurate in either tail.
double normal_mass(double a, double b, double x, double h) {
    const double za = (a - x) / h;
    const double zb = (b - x) / h;
    if (za > 0.0) return special::normal_sf(za) - special::normal_sf(zb);
    return special::normal_cdf(zb) - special::normal_cdf(za);
}

double binomial_log_pmf(double trials, double p, double u) {
    if (p >= 1.0) return u == trials ? 0.0 : -kInf;
    return special::log_choose(trials, u) + u * std::log(p) + (trials - u) * std::log1p(-p);
}

} // namespace

KernelKind KernelKind::gamma(double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("Gamma kernel needs a finite lower bound");
    return {KernelFamily::Gamma, a, kInf};
}

KernelKind KernelKind::negative_gamma(double b) {
    if (!std::isfinite(b)) throw std::invalid_argument("NegativeGamma kernel needs a finite upper bound");
    return {KernelFamily::NegativeGamma, -kInf, b};
}

KernelKind KernelKind::truncated_gaussian(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw std::invalid_argument("TruncatedGaussian kernel requires finite a < b");
    }
    return {KernelFamily::TruncatedGaussian, a, b};
}

bool KernelKind::in_support(double u) const noexcept {
    if (std::isnan(u)) return false;
    switch (family) {
    case KernelFamily::Gaussian:
    case KernelFamily::Dirac: return std::isfinite(u);
    case KernelFamily::Binomial: return is_count(u);
    case KernelFamily::Gamma: return u >= lower && u < kInf;
    case KernelFamily::NegativeGamma: return u <= upper && u > -kInf;
    case KernelFamily::Beta01: return u >= 0.0 && u <= 1.0;
    case KernelFamily::TruncatedGaussian: return u >= lower && u <= upper;
    }
    return false;
}

std::string KernelKind::name() const {
    switch (family) {
    case KernelFamily::Gaussian: return "Gaussian";
    case KernelFamily::Binomial: return "Binomial";
    case KernelFamily::Gamma: return "Gamma(a=" + std::to_string(lower) + ")";
    case KernelFamily::NegativeGamma: return "NegativeGamma(b=" + std::to_string(upper) + ")";
    case KernelFamily::Beta01: return "Beta01";
    case KernelFamily::TruncatedGaussian:
        return "TruncatedGaussian(a=" + std::to_string(lower) + ", b=" + std::to_string(upper) + ")";
    case KernelFamily::Dirac: return "Dirac";
    }
    return "unknown";
}

KernelKind kernel_for(const VariableKind& kind) {
    switch (kind.support) {
    case Support::RealLine: return KernelKind::gaussian();
    case Support::Count: return KernelKind::binomial();
    case Support::PositiveHalfLine: return KernelKind::gamma(kind.lower);
    case Support::NegativeHalfLine: return KernelKind::negative_gamma(kind.upper);
    case Support::UnitInterval: return KernelKind::beta01();
    case Support::BoundedInterval: return KernelKind::truncated_gaussian(kind.lower, kind.upper);
    }
    return KernelKind::gaussian();
}

bool compatible(const KernelKind& kernel, const VariableKind& variable) {
    if (kernel.family == KernelFamily::Dirac) return true;
    return kernel == kernel_for(variable);
}

FittedKernel::FittedKernel(KernelKind kind_, double h_) : kind(kind_), h(h_) {
    if (kind.family == KernelFamily::Dirac) return;
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("bandwidth must be positive and finite");
    }
    if (kind.family == KernelFamily::Binomial && !(h < 1.0)) {
        throw std::invalid_argument("Binomial kernel bandwidth must lie in (0, 1)");
    }
}

double kernel_density(const FittedKernel& k, double u, double x) {
    require_center(k, x);
    if (!k.kind.in_support(u)) return 0.0;
    const double h = k.h;
    switch (k.kind.family) {
    case KernelFamily::Gaussian: return special::normal_pdf((u - x) / h) / h;
    case KernelFamily::Binomial: {
        const double trials = x + 1.0;
        if (u > trials) return 0.0;
        return std::exp(binomial_log_pmf(trials, (x + h) / trials, u));
    }
    case KernelFamily::Gamma:
        return gamma_density(u - k.kind.lower, 1.0 + (x - k.kind.lower) / h, h);
    case KernelFamily::NegativeGamma:
        return gamma_density(k.kind.upper - u, 1.0 + (k.kind.upper - x) / h, h);
    case KernelFamily::Beta01: {
        const double a = x / h + 1.0;
        const double b = (1.0 - x) / h + 1.0;
        const double lb = special::log_beta(a, b);
        if (u == 0.0) return a == 1.0 ? std::exp(-lb) : 0.0;
        if (u == 1.0) return b == 1.0 ? std::exp(-lb) : 0.0;
        return std::exp((a - 1.0) * std::log(u) + (b - 1.0) * std::log1p(-u) - lb);
    }
    case KernelFamily::TruncatedGaussian: {
        const double mass = normal_mass(k.kind.lower, k.kind.upper, x, h);
        return special::normal_pdf((u - x) / h) / (h * mass);
    }
    case KernelFamily::Dirac: return u == x ? 1.0 : 0.0;
    }
    return 0.0;
}

double kernel_sample(const FittedKernel& k, double x, Rng& rng) {
    require_center(k, x);
    const double h = k.h;
    switch (k.kind.family) {
    case KernelFamily::Gaussian: return x + h * rng.normal();
    case KernelFamily::Binomial: {
        // Inversion over the mass function, normalised from its maximum so
        // large counts do not underflow.
        const double trials = x + 1.0;
        const double p = (x + h) / trials;
        const auto n = static_cast<std::size_t>(trials);
        std::vector<double> logp(n + 1);
        double best = -kInf;
        for (std::size_t u = 0; u <= n; ++u) {
            logp[u] = binomial_log_pmf(trials, p, static_cast<double>(u));
            best = std::max(best, logp[u]);
        }
        double total = 0.0;
        for (auto& v : logp) {
            v = std::exp(v - best);
            total += v;
        }
        const double target = rng.uniform() * total;
        double cum = 0.0;
        for (std::size_t u = 0; u <= n; ++u) {
            cum += logp[u];
            if (target < cum) return static_cast<double>(u);
        }
        return trials;
    }
    case KernelFamily::Gamma: {
        const double a = k.kind.lower;
        return a + rng.gamma(1.0 + (x - a) / h, h);
    }
    case KernelFamily::NegativeGamma: {
        const double b = k.kind.upper;
        return b - rng.gamma(1.0 + (b - x) / h, h);
    }
    case KernelFamily::Beta01: return rng.beta(x / h + 1.0, (1.0 - x) / h + 1.0);
    case KernelFamily::TruncatedGaussian: {
        const double a = k.kind.lower;
        const double b = k.kind.upper;
        const double za = (a - x) / h;
        const double zb = (b - x) / h;
        const double u = rng.uniform_open();
        double z;
        if (za > 0.0) {
            // Whole interval in the upper tail: invert the survival function.
            const double sa = special::normal_sf(za);
            const double sb = special::normal_sf(zb);
            z = -special::normal_quantile(sa - u * (sa - sb));
        } else {
            const double ca = special::normal_cdf(za);
            const double cb = special::normal_cdf(zb);
            z = special::normal_quantile(ca + u * (cb - ca));
        }
        return std::clamp(x + h * z, a, b);
    }
    case KernelFamily::Dirac: return x;
    }
    return x;
}

double kde_eval(std::span<const double> sample, const KernelKind& kind, double h, double u) {
    if (sample.empty()) throw std::invalid_argument("kde_eval: empty sample");
    const FittedKernel k(kind, h);
    double total = 0.0;
    for (double x : sample) total += kernel_density(k, u, x);
    return total / static_cast<double>(sample.size());
}

} // namespace goliath
