#pragma once

#include "goliath/dataset.hpp"
#include "goliath/forest.hpp"
#include "goliath/generators.hpp"
#include "goliath/targets.hpp"
#include "goliath/weights.hpp"

#include <optional>
#include <vector>

namespace goliath {

/// Everything needed to turn a dataset into an oversampled one.
struct PipelineConfig {
    GeneratorConfig generator;
    TargetConfig target;
    /// Unset: inverse-squared for augment mode, inverse otherwise.
    std::optional<WeightMode> weights;
    double trim = kDefaultTrimFactor;
    ForestParams forest;

    WeightMode resolved_weights() const;
    void validate() const;
};

/// Weights from the target (uniform when there is none), covariate
/// generation, then, when the dataset is supervised, a forest on the input
/// and target generation. `user_weights` is required for WeightMode::User.
SynthesisResult synthesize(const Dataset& ds, const PipelineConfig& cfg, Rng& rng,
                           const std::optional<std::vector<double>>& user_weights = std::nullopt);

} // namespace goliath
