#pragma once

#include "goliath/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace goliath {

struct ForestParams {
    std::size_t n_trees = 200;
    std::size_t min_leaf = 5;
    std::size_t max_depth = 0; // 0: unlimited
    /// Features tried per split; unset means ceil(p / 3).
    std::optional<std::size_t> mtry;
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    double value = 0.0;
};

/// Axis-aligned regression tree; x[feature] <= threshold goes left.
struct RegressionTree {
    std::vector<TreeNode> nodes;
    double predict(std::span<const double> x) const;
};

struct ForestModel {
    ForestParams params;
    std::size_t n_features = 0;
    std::vector<RegressionTree> trees;
    /// Stream seed of each tree's bootstrap and feature draws.
    std::vector<std::uint64_t> tree_seeds;

    double predict_mean(std::span<const double> x) const;
    std::vector<double> predict(const Matrix& x) const;
};

struct PredictionDistribution {
    std::vector<double> per_tree;
    double mean = 0.0;
};

/// Breiman forest: bootstrap rows per tree, mtry features per split,
/// variance-reduction splits, leaves of at least min_leaf rows. Trees are
/// grown in parallel from per-tree streams.
ForestModel train_forest(const Matrix& x, std::span<const double> y, const ForestParams& params = {});

PredictionDistribution predict_distribution(const ForestModel& model, std::span<const double> x);

} // namespace goliath
