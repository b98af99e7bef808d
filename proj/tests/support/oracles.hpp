#pragma once

// Reference computations for the tests. Everything here is written from the
// defining formulas with Boost.Math and never calls into the library's own
// special functions, samplers or bandwidth code.

#include "goliath/kernels.hpp"
#include "goliath/matrix.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace goliath::test {

/// Closed-form CDF of the kernel centred at x, evaluated at u.
double kernel_cdf(const FittedKernel& k, double x, double u);

/// Adaptive Gauss-Kronrod integral; infinite limits are allowed.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

/// CDF values at ascending points, accumulated from `lower` by quadrature of `density`.
std::vector<double> cumulative_cdf(const std::function<double(double)>& density, double lower,
                                   std::span<const double> sorted_points);

/// sup |F_n - F| for continuous F given at the sorted sample points.
double ks_statistic(std::span<const double> sorted, std::span<const double> cdf_at_sorted);
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic Kolmogorov tail P(sqrt(n_eff) D > t) for the observed D.
double ks_pvalue(double d, double n_eff);

double point_segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b);

/// Brute-force neighbours: all j != i ordered by (distance, index) on
/// columns standardised with the sample sd.
std::vector<std::vector<std::size_t>> brute_force_neighbors(const Matrix& x, std::size_t k);

/// Five points in general position in the plane.
Matrix five_point_plane();

} // namespace goliath::test
