#include "goliath/forest.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/parallel.hpp"
#include "goliath/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace goliath {

namespace {

struct Builder {
    const Matrix& x;
    std::span<const double> y;
    const ForestParams& params;
    std::size_t mtry;
    Rng& rng;
    RegressionTree tree;
    std::vector<std::size_t> features;

    double mean_of(std::span<const std::size_t> idx) const {
        double s = 0.0;
        for (std::size_t i : idx) s += y[i];
        return s / static_cast<double>(idx.size());
    }

    std::uint32_t leaf(std::span<const std::size_t> idx) {
        TreeNode node;
        node.value = mean_of(idx);
        tree.nodes.push_back(node);
        return static_cast<std::uint32_t>(tree.nodes.size() - 1);
    }

    // Grows the subtree over idx (reordered in place) and returns its root.
    std::uint32_t grow(std::span<std::size_t> idx, std::size_t depth) {
        const std::size_t n = idx.size();
        const std::size_t min_leaf = params.min_leaf;
        if (n < 2 * min_leaf || (params.max_depth > 0 && depth >= params.max_depth)) return leaf(idx);

        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i : idx) {
            sum += y[i];
            sum_sq += y[i] * y[i];
        }
        const double sse_parent = sum_sq - sum * sum / static_cast<double>(n);
        if (!(sse_parent > 1e-12 * (1.0 + sum_sq))) return leaf(idx);

        // Partial Fisher-Yates: the first mtry entries are this node's features.
        for (std::size_t f = 0; f < mtry; ++f) {
            const std::size_t pick = f + rng.uniform_index(features.size() - f);
            std::swap(features[f], features[pick]);
        }

        int best_feature = -1;
        double best_gain = 0.0;
        double best_threshold = 0.0;
        std::vector<std::size_t> order(idx.begin(), idx.end());
        for (std::size_t f = 0; f < mtry; ++f) {
            const std::size_t feat = features[f];
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = x(a, feat);
                const double vb = x(b, feat);
                return va < vb || (va == vb && a < b);
            });
            double left_sum = 0.0;
            for (std::size_t r = 0; r + 1 < n; ++r) {
                left_sum += y[order[r]];
                const std::size_t nl = r + 1;
                const std::size_t nr = n - nl;
                if (nl < min_leaf) continue;
                if (nr < min_leaf) break;
                const double v_here = x(order[r], feat);
                const double v_next = x(order[r + 1], feat);
                if (v_here == v_next) continue;
                const double right_sum = sum - left_sum;
                // SSE reduction = sum_l^2/n_l + sum_r^2/n_r - sum^2/n
                const double gain = left_sum * left_sum / static_cast<double>(nl) +
                                    right_sum * right_sum / static_cast<double>(nr) -
                                    sum * sum / static_cast<double>(n);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(feat);
                    best_threshold = 0.5 * (v_here + v_next);
                    if (best_threshold == v_next) best_threshold = v_here; // adjacent doubles
                }
            }
        }
        if (best_feature < 0) return leaf(idx);

        const auto feat = static_cast<std::size_t>(best_feature);
        const auto mid = std::stable_partition(idx.begin(), idx.end(),
                                               [&](std::size_t i) { return x(i, feat) <= best_threshold; });
        const auto n_left = static_cast<std::size_t>(mid - idx.begin());

        tree.nodes.push_back(TreeNode{best_feature, best_threshold, 0, 0, sum / static_cast<double>(n)});
        const auto self = static_cast<std::uint32_t>(tree.nodes.size() - 1);
        const std::uint32_t left = grow(idx.subspan(0, n_left), depth + 1);
        const std::uint32_t right = grow(idx.subspan(n_left), depth + 1);
        tree.nodes[self].left = left;
        tree.nodes[self].right = right;
        return self;
    }
};

} // namespace

double RegressionTree::predict(std::span<const double> x) const {
    std::uint32_t at = 0;
    while (nodes[at].feature >= 0) {
        const auto& node = nodes[at];
        at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
    return nodes[at].value;
}

double ForestModel::predict_mean(std::span<const double> x) const {
    if (x.size() != n_features) throw std::invalid_argument("forest: dimension mismatch");
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(x);
    return s / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const Matrix& x) const {
    std::vector<double> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict_mean(x.row(i));
    return out;
}

ForestModel train_forest(const Matrix& x, std::span<const double> y, const ForestParams& params) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (n < 5) throw std::invalid_argument("train_forest: need at least 5 rows");
    if (y.size() != n) throw std::invalid_argument("train_forest: target length differs from row count");
    if (p == 0) throw std::invalid_argument("train_forest: no covariates");
    if (params.n_trees == 0) throw std::invalid_argument("train_forest: need at least one tree");
    if (params.min_leaf == 0) throw std::invalid_argument("train_forest: min_leaf must be positive");
    const std::size_t mtry = std::clamp<std::size_t>(params.mtry.value_or((p + 2) / 3), 1, p);
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); })) {
        warn("constant target; the forest predicts the constant");
    }

    ForestModel model;
    model.params = params;
    model.n_features = p;
    model.trees.resize(params.n_trees);
    model.tree_seeds.resize(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t) model.tree_seeds[t] = stream_seed(params.seed, t);

    parallel_for(params.n_trees, [&](std::size_t t) {
        Rng rng(model.tree_seeds[t]);
        std::vector<std::size_t> idx(n);
        for (auto& i : idx) i = rng.uniform_index(n);
        std::vector<std::size_t> features(p);
        std::iota(features.begin(), features.end(), std::size_t{0});
        Builder b{x, y, params, mtry, rng, {}, std::move(features)};
        b.grow(idx, 0);
        model.trees[t] = std::move(b.tree);
    });
    return model;
}

PredictionDistribution predict_distribution(const ForestModel& model, std::span<const double> x) {
    if (x.size() != model.n_features) throw std::invalid_argument("forest: dimension mismatch");
    PredictionDistribution d;
    d.per_tree.reserve(model.trees.size());
    double s = 0.0;
    for (const auto& t : model.trees) {
        d.per_tree.push_back(t.predict(x));
        s += d.per_tree.back();
    }
    d.mean = s / static_cast<double>(d.per_tree.size());
    return d;
}

} // namespace goliath
