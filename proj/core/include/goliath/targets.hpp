#pragma once

#include "goliath/dataset.hpp"
#include "goliath/forest.hpp"
#include "goliath/generators.hpp"
#include "goliath/random.hpp"

#include <span>
#include <vector>

namespace goliath {

/// Target generation for synthetic rows with seed s and covariates x*:
///   0  y* = y_s
///   1  y* = y_s + |e| v sign(m(x_s) - m(x*)), e drawn from the seed's
///      per-tree residuals y_s - tree_t(x_s), v ~ N(1, sigma^2)
///   2  y* = y_s + m(x*) - m(x_s)
///   3  as 1 with |e| replaced by |N(0, h^2)|, h the Silverman bandwidth of
///      the residual pool
///   4  y* = y_s + |N(0, (sd_w(y) pert)^2)| sign(m(x_s) - m(x*))
///   5  y* = y_s + |N(0, h_y^2)| sign(m(x_s) - m(x*)), h_y the weighted KDE
///      bandwidth of y
/// m is the forest mean prediction. When m(x_s) = m(x*) the sign is drawn
/// uniformly from {-1, +1}.
inline constexpr int kMaxTargetMethod = 5;

struct TargetConfig {
    int method = 1;
    double sigma = 0.0;
    double pert = 0.1;
    void validate() const;
};

/// One value per row of synth.data. Rows not flagged synthetic keep their
/// original target bit-exact. `model` may be null for method 0; `weights`
/// (drawing weights over ds rows) is used by methods 4 and 5, empty meaning
/// uniform. Row t draws from stream t of rng.
std::vector<double> generate_targets(const TargetConfig& cfg, const Dataset& ds, const SynthesisResult& synth,
                                     const ForestModel* model, std::span<const double> weights, Rng& rng);

/// Copy of synth with the target column replaced. Values outside the target
/// support are projected onto it (Count rounds, bounds clamp) and counted.
SynthesisResult with_targets(const SynthesisResult& synth, std::span<const double> y);

} // namespace goliath
