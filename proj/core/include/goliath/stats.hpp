#pragma once

#include <span>
#include <vector>

namespace goliath::stats {

double mean(std::span<const double> x);
/// Sample variance with the n - 1 denominator.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
/// Population (MLE, 1/n) variance.
double population_variance(std::span<const double> x);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of a sorted sample.
double quantile_sorted(std::span<const double> sorted, double p);
double quantile(std::span<const double> x, double p);
double median(std::span<const double> x);
double iqr(std::span<const double> x);

/// Moment skewness m3 / m2^(3/2). Computed on the sorted sample so the
/// result does not depend on row order.
double skewness(std::span<const double> x);

/// Silverman's rule of thumb 1.06 * min(sd, IQR / 1.34) * n^(-1/5).
/// Falls back to sd when the IQR is zero; returns 0 for a constant sample.
double silverman_bandwidth(std::span<const double> x);

/// Weighted moments with weights normalized internally.
double weighted_mean(std::span<const double> x, std::span<const double> w);
/// Reliability-weighted standard deviation: sum w (x - m)^2 / (1 - sum w^2).
double weighted_stddev(std::span<const double> x, std::span<const double> w);
double weighted_quantile(std::span<const double> x, std::span<const double> w, double p);
/// Silverman rule with weighted scale estimates and Kish effective size.
double weighted_silverman_bandwidth(std::span<const double> x, std::span<const double> w);

double pearson(std::span<const double> a, std::span<const double> b);

/// Average ranks (1 = smallest), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

} // namespace goliath::stats
