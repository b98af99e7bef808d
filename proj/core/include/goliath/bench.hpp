#pragma once

#include "goliath/dataset.hpp"
#include "goliath/learners.hpp"
#include "goliath/pipeline.hpp"
#include "goliath/random.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace goliath {

enum class MethodKind { FullTrain, Imbalanced, Goliath };

struct MethodSpec {
    std::string name;
    MethodKind kind = MethodKind::Goliath;
    PipelineConfig pipeline;
    /// Synthetic sample size relative to the imbalanced train size.
    double n_ratio = 1.0;
};

/// FTrain, Imb, G-OS, G-CSB, G-NCSB, G-ROSE, G-GN, G-SMOTE, G-NNSB, G-NNSBw,
/// G-eNNSB, G-GNwCl, G-ROSEwCl. All GOLIATH presets use mix mode.
MethodSpec preset_method(const std::string& name);
std::vector<std::string> preset_names();

/// Sets one `key=value` option of a GOLIATH method (the generate flags without
/// dashes, underscores for dashes), e.g. "family", "k", "noise_mult",
/// "method_y", "cluster", "n_ratio".
void apply_method_option(MethodSpec& spec, const std::string& key, const std::string& value);

struct BenchmarkConfig {
    double test_prop = 0.2;
    double imb_prop = 0.15;
    std::size_t n_runs = 10;
    std::vector<MethodSpec> methods;
    std::vector<LearnerKind> learners{LearnerKind::Forest, LearnerKind::Ridge, LearnerKind::Knn};
    std::uint64_t seed = 1;
    /// Draw the imbalanced train with weights 1/f^2 instead of f^2.
    bool inverse_squared_train = false;
    double trim = kDefaultTrimFactor;

    void validate() const;
};

struct Split {
    std::vector<std::size_t> train_imbalanced;
    std::vector<std::size_t> train_full;
    std::vector<std::size_t> test;
};

/// Minimum size of the test set and the imbalanced train.
inline constexpr std::size_t kMinSplitRows = 20;

/// Weighted sampling without replacement (Efraimidis-Spirakis keys).
std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> w, std::size_t m, Rng& rng);

/// Per run: test drawn with probability proportional to the trimmed inverse
/// target density; imbalanced train drawn from the remainder proportional to
/// f^2 (or 1/f^2); train_full is the whole remainder. Run r uses stream r.
std::vector<Split> make_splits(const Dataset& ds, const BenchmarkConfig& cfg, Rng& rng);

struct Metrics {
    double rmse = 0.0;
    double wrmse = 0.0;
    double mae = 0.0;
    double pearson = 0.0;
};

Metrics compute_metrics(std::span<const double> pred, std::span<const double> truth,
                        std::span<const double> weights);

struct MetricRecord {
    std::size_t run = 0;
    std::size_t method = 0;
    std::size_t learner = 0;
    bool ok = false;
    Metrics metrics;
};

struct BenchmarkReport {
    std::vector<std::string> methods;
    std::vector<std::string> learners;
    std::size_t n_runs = 0;
    std::vector<MetricRecord> records; // run-major, then method, then learner
    /// aggregated[run][method]: learner-averaged metrics; ok false if any learner failed.
    std::vector<std::vector<MetricRecord>> aggregated;
    /// ranks[run][method], 1 = smallest aggregated RMSE; failures rank last.
    std::vector<std::vector<double>> ranks;

    double mean_rank(std::size_t method) const;
    double mean_metric(std::size_t method, double Metrics::*field) const;

    void write_metrics_csv(const std::filesystem::path& path) const;
    void write_ranks_csv(const std::filesystem::path& path) const;
    void write_rank_heatmap_csv(const std::filesystem::path& path) const;
    std::string summary() const;
};

BenchmarkReport evaluate(const Dataset& ds, const std::vector<Split>& splits, const BenchmarkConfig& cfg,
                         Rng& rng);

/// make_splits then evaluate from Rng(cfg.seed).
BenchmarkReport run_benchmark(const Dataset& ds, const BenchmarkConfig& cfg);

} // namespace goliath
