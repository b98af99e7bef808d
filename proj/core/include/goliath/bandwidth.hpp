#pragma once

#include "goliath/kernels.hpp"

#include <span>

namespace goliath {

/// Data-driven bandwidth for a kernel family:
///   Gaussian            Silverman's rule of thumb
///   Binomial            likelihood cross-validation on h = k/51, k = 1..50
///   Gamma, NegativeGamma, Beta01, TruncatedGaussian
///                       least-squares cross-validation, golden-section search
///                       over log h in [1e-4 * range, range]
///   Dirac               0
/// A constant sample yields 1e-6 * (1 + |mean|) and a warning.
double estimate_bandwidth(const KernelKind& kind, std::span<const double> sample);

/// LSCV criterion  int fhat^2 - (2/n) sum_i fhat_{-i}(x_i),  with the
/// integrated term evaluated in closed form for every kernel family.
double lscv_score(const KernelKind& kind, std::span<const double> sample, double h);

/// Leave-one-out log likelihood of the Binomial-kernel estimate. Points with
/// zero leave-one-out mass for every h are skipped.
double binomial_lcv_score(std::span<const double> sample, double h);

/// Kernel with its estimated bandwidth scaled by `multiplier`. Binomial
/// bandwidths are kept below 1.
FittedKernel fit_kernel(const KernelKind& kind, std::span<const double> sample,
                        double multiplier = 1.0);

/// Largest sample the LSCV search uses directly; larger samples are thinned
/// to evenly spaced order statistics and the bandwidth rescaled by the
/// family's asymptotic rate.
inline constexpr std::size_t kLscvMaxSample = 1000;

} // namespace goliath
