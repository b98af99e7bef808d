#include "goliath/pipeline.hpp"

#include "goliath/diagnostics.hpp"

#include <algorithm>
#include <stdexcept>

namespace goliath {

namespace {

constexpr std::uint64_t kGenerateStream = 0;
constexpr std::uint64_t kForestStream = 1;
constexpr std::uint64_t kTargetStream = 2;

} // namespace

WeightMode PipelineConfig::resolved_weights() const {
    if (weights) return *weights;
    return generator.mode == OutputMode::Augment ? WeightMode::InverseSquared : WeightMode::Inverse;
}

void PipelineConfig::validate() const {
    generator.validate();
    target.validate();
    if (!(trim >= 1.0)) throw std::invalid_argument("trim factor must be at least 1");
}

SynthesisResult synthesize(const Dataset& ds, const PipelineConfig& cfg, Rng& rng,
                           const std::optional<std::vector<double>>& user_weights) {
    cfg.validate();
    const WeightMode mode = cfg.resolved_weights();
    DrawingWeights w;
    if (mode == WeightMode::User) {
        if (!user_weights) throw std::invalid_argument("user weight mode needs a weight vector");
        if (user_weights->size() != ds.rows()) throw std::invalid_argument("user weights do not match the row count");
        w = goliath::user_weights(*user_weights);
    } else if (!ds.target_column() || mode == WeightMode::Uniform) {
        if (!ds.target_column() && mode != WeightMode::Uniform) {
            warn("no target column; drawing weights are uniform");
        }
        w = uniform_weights(ds.rows());
    } else {
        w = inverse_kde_weights(ds.target(), mode, cfg.trim);
    }

    Rng gen_rng = rng.split(kGenerateStream);
    SynthesisResult result = generate(ds, cfg.generator, w, gen_rng);
    if (!ds.target_column() || cfg.target.method == 0) return result;
    if (std::none_of(result.is_synthetic.begin(), result.is_synthetic.end(), [](bool b) { return b; })) {
        return result;
    }

    ForestParams fp = cfg.forest;
    fp.seed = stream_seed(rng.seed(), kForestStream);
    const ForestModel model = train_forest(ds.covariates(), ds.target(), fp);
    Rng target_rng = rng.split(kTargetStream);
    const auto y = generate_targets(cfg.target, ds, result, &model, w.w, target_rng);
    return with_targets(result, y);
}

} // namespace goliath
