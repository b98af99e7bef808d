#pragma once

#include "goliath/matrix.hpp"
#include "goliath/random.hpp"

#include <cstddef>
#include <vector>

namespace goliath {

struct GmmComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> variance; // diagonal
};

struct GmmModel {
    std::vector<GmmComponent> components;
    double log_likelihood = 0.0;
    double bic = 0.0;
    /// Log-likelihood after each EM iteration of the kept run.
    std::vector<double> ll_trace;
    /// bic_by_components[g - 1] is the best BIC reached with g components.
    std::vector<double> bic_by_components;

    std::size_t n_components() const noexcept { return components.size(); }
    std::size_t dims() const noexcept { return components.empty() ? 0 : components.front().mean.size(); }

    /// Posterior component probabilities of one row; sums to 1.
    std::vector<double> responsibilities(std::span<const double> x) const;
};

struct GmmOptions {
    std::size_t restarts = 5;
    std::size_t max_iterations = 200;
    double tolerance = 1e-8; // relative log-likelihood change
};

/// EM for a diagonal Gaussian mixture with exactly g components; best of
/// `restarts` k-means++ initialisations.
GmmModel fit_gmm_components(const Matrix& x, std::size_t g, Rng& rng, const GmmOptions& opts = {});

/// Fits g = 1..m and keeps the smallest BIC = -2 loglik + ((g-1) + 2gp) ln n.
GmmModel fit_gmm(const Matrix& x, std::size_t m, Rng& rng, const GmmOptions& opts = {});

/// Most probable component per row; ties go to the lower index.
std::vector<std::size_t> assign(const GmmModel& model, const Matrix& x);

} // namespace goliath
