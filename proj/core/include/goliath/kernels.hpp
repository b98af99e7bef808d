#pragma once

#include "goliath/dataset.hpp"
#include "goliath/random.hpp"

#include <limits>
#include <span>
#include <string>

namespace goliath {

enum class KernelFamily {
    Gaussian,          // real line
    Binomial,          // counts; h in (0, 1)
    Gamma,             // [a, +inf)
    NegativeGamma,     // (-inf, b]
    Beta01,            // [0, 1]
    TruncatedGaussian, // [a, b]
    Dirac,             // any; h unused
};

struct KernelKind {
    KernelFamily family = KernelFamily::Gaussian;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    static KernelKind gaussian() { return {}; }
    static KernelKind binomial() { return {KernelFamily::Binomial, 0.0, std::numeric_limits<double>::infinity()}; }
    static KernelKind gamma(double a);
    static KernelKind negative_gamma(double b);
    static KernelKind beta01() { return {KernelFamily::Beta01, 0.0, 1.0}; }
    static KernelKind truncated_gaussian(double a, double b);
    static KernelKind dirac() { return {KernelFamily::Dirac}; }

    /// Whether a kernel centred anywhere can put mass at u.
    bool in_support(double u) const noexcept;
    std::string name() const;

    friend bool operator==(const KernelKind&, const KernelKind&) = default;
};

/// The kernel serving each variable support (Gaussian for the real line,
/// Binomial for counts, Gamma/NegativeGamma for half-lines, Beta for [0,1],
/// truncated Gaussian for [a,b]).
KernelKind kernel_for(const VariableKind& kind);

/// Dirac is compatible with every support; otherwise kind must equal
/// kernel_for(variable).
bool compatible(const KernelKind& kernel, const VariableKind& variable);

struct FittedKernel {
    KernelKind kind;
    double h = 0.0;

    FittedKernel() = default;
    /// Validates h > 0, and h in (0, 1) for Binomial. Dirac ignores h.
    FittedKernel(KernelKind kind, double h);
};

/// K_h(u, x): density (probability mass for Binomial and Dirac) at u of the
/// kernel centred at x. Zero when u is outside the support. Throws
/// std::domain_error when x is outside the support.
double kernel_density(const FittedKernel& k, double u, double x);

/// Exact draw from kernel_density(k, ., x).
double kernel_sample(const FittedKernel& k, double x, Rng& rng);

/// (1/n) sum_i K_h(u, x_i).
double kde_eval(std::span<const double> sample, const KernelKind& kind, double h, double u);

} // namespace goliath
