#pragma once

#include "goliath/dataset.hpp"
#include "goliath/kernels.hpp"
#include "goliath/neighbors.hpp"
#include "goliath/random.hpp"
#include "goliath/weights.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace goliath {

enum class Family { OS, CSB, NCSB, ROSE, GN, SMOTE, NNSB, ENNSB };
enum class OutputMode { Synth, Augment, Mix };
enum class NeighborWeighting { Uniform, DistanceProportional, InverseDistance };

std::string to_string(Family f);
std::string to_string(OutputMode m);
std::string to_string(NeighborWeighting w);
Family parse_family(const std::string& text);
OutputMode parse_output_mode(const std::string& text);
NeighborWeighting parse_neighbor_weighting(const std::string& text);

bool is_interpolation(Family f) noexcept;

struct GeneratorConfig {
    Family family = Family::NCSB;
    std::size_t k = 5;
    /// Perturbation scale; unset means 1, or 0.1 (sigma_noise) for GN.
    std::optional<double> noise_mult;
    double alpha = 1.0;
    double beta = 1.0;
    /// Absolute sd of the eNNSB Gaussian layer; unset means per-column
    /// Silverman bandwidth times noise_mult.
    std::optional<double> sigma_extend;
    NeighborWeighting nn_weighting = NeighborWeighting::Uniform;
    Distance distance = Distance::Euclidean;
    bool standardize = true;
    std::size_t n_synthetic = 0;
    OutputMode mode = OutputMode::Mix;
    bool clustering = false;
    std::size_t max_components = 5;
    /// Cluster on the target instead of the covariates.
    bool cluster_on_target = false;
    /// Per-covariate bandwidth overrides (CSB and NCSB), by column name.
    std::map<std::string, double> bandwidths;
    /// Covariates generated with the Dirac kernel (copied from the seed).
    std::vector<std::string> frozen_columns;

    double resolved_noise_mult() const;
    /// Throws std::invalid_argument on out-of-domain values.
    void validate() const;
};

struct SynthesisResult {
    /// Same columns as the input. The target column holds the seed's target
    /// until target generation replaces synthetic entries. Columns whose
    /// generated values leave their support are relaxed to RealLine.
    Dataset data;
    std::vector<std::size_t> seed_index;
    std::vector<bool> is_synthetic;
    /// Per column of `data`: generated cells outside the input support.
    std::vector<std::size_t> support_violations;
    GeneratorConfig config;
    std::uint64_t rng_seed = 0;
    /// Synthetic targets moved onto the target support (rounded or clamped).
    std::size_t targets_projected = 0;
};

/// Draws N seeds with weights w and generates one row per seed, assembled
/// according to cfg.mode. Row t uses stream t of a dedicated key, so the
/// result does not depend on the worker count.
SynthesisResult generate(const Dataset& ds, const GeneratorConfig& cfg, const DrawingWeights& w,
                         Rng& rng);

/// Same, with the seed sequence given explicitly.
SynthesisResult generate_from_seeds(const Dataset& ds, const GeneratorConfig& cfg,
                                    std::span<const std::size_t> seeds, Rng& rng);

/// Per-column bandwidth of the ROSE rule (4 / ((p + 2) n))^(1/(p+4)) * sigma.
double rose_bandwidth(std::size_t n, std::size_t p, double sigma);

std::vector<double> sample_csb(std::span<const double> seed_row, std::span<const double> h, Rng& rng);
std::vector<double> sample_ncsb(std::span<const double> seed_row, std::span<const FittedKernel> kernels,
                                Rng& rng);
/// Checks each kernel against its column kind before sampling.
std::vector<double> sample_ncsb(std::span<const double> seed_row, std::span<const FittedKernel> kernels,
                                std::span<const VariableKind> kinds, Rng& rng);
std::vector<double> sample_rose(std::span<const double> seed_row, std::span<const double> sigma_hat,
                                std::size_t n, std::size_t p, double noise_mult, Rng& rng);
std::vector<double> sample_gn(std::span<const double> seed_row, std::span<const double> sigma_hat,
                              double sigma_noise, Rng& rng);

/// x* = lambda x_seed + (1 - lambda) x_neighbour with one lambda ~ U(0,1)
/// for all coordinates and the neighbour uniform among the k nearest.
std::vector<double> sample_smote(std::size_t seed, const NeighborTable& nt, const Matrix& x, Rng& rng);

/// As sample_smote with lambda ~ Beta(alpha, beta) and a weighted neighbour.
/// Distance-proportional weighting with all distances zero falls back to
/// uniform; `fell_back`, when given, is set in that case.
std::vector<double> sample_nnsb(std::size_t seed, const NeighborTable& nt, const Matrix& x, double alpha,
                                double beta, NeighborWeighting weighting, Rng& rng,
                                bool* fell_back = nullptr);

/// NNSB point plus independent N(0, sigma_j^2) noise per column.
std::vector<double> sample_ennsb(std::size_t seed, const NeighborTable& nt, const Matrix& x, double alpha,
                                 double beta, std::span<const double> sigma, Rng& rng,
                                 NeighborWeighting weighting = NeighborWeighting::Uniform);

} // namespace goliath
