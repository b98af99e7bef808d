#pragma once

#include "goliath/random.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace goliath {

enum class WeightMode { Inverse, InverseSquared, Uniform, User };

std::string to_string(WeightMode mode);
WeightMode parse_weight_mode(const std::string& text);

inline constexpr double kDefaultTrimFactor = 20.0;

/// Seed-drawing probabilities. Entries are non-negative and sum to 1; only
/// user-supplied weights may contain zeros.
struct DrawingWeights {
    std::vector<double> w;
    double trim_factor = kDefaultTrimFactor;
    WeightMode mode = WeightMode::Uniform;

    std::size_t size() const noexcept { return w.size(); }
};

/// Gaussian KDE of y with Silverman bandwidth, evaluated at every y_i.
/// Empty when y is constant.
std::vector<double> target_density(std::span<const double> y);

/// Raw weights 1/f(y_i) or 1/f(y_i)^2, clipped at trim_factor * median and
/// normalized; afterwards max / median <= trim_factor holds exactly.
/// Constant y gives uniform weights and a warning.
DrawingWeights inverse_kde_weights(std::span<const double> y, WeightMode mode,
                                   double trim_factor = kDefaultTrimFactor);

DrawingWeights uniform_weights(std::size_t n);

/// Normalizes arbitrary non-negative weights with a positive sum.
DrawingWeights user_weights(std::span<const double> raw);

/// N iid categorical draws with probabilities w.w.
std::vector<std::size_t> draw_seeds(const DrawingWeights& w, std::size_t n_draws, Rng& rng);

} // namespace goliath
