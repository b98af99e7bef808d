#pragma once

// Special functions needed by the kernels: log-gamma via the Lanczos
// approximation, the Beta function, and the standard normal distribution.

namespace goliath::special {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

/// ln|Γ(x)| for x > 0, Lanczos (g = 7, 9 terms); relative error ~1e-15.
/// Uses the reflection formula below 0.5.
double log_gamma(double x);

double gamma(double x);

double log_beta(double a, double b);

/// ln of the binomial coefficient C(n, k) for real n >= k >= 0.
double log_choose(double n, double k);

double normal_pdf(double z);
double normal_cdf(double z);
/// Upper tail 1 - Φ(z) without cancellation.
double normal_sf(double z);
/// Φ^{-1}(p), p in (0, 1). Wichura's AS241 (PPND16), ~1e-16 relative.
double normal_quantile(double p);

} // namespace goliath::special
