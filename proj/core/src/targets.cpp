#include "goliath/targets.hpp"

#include "goliath/parallel.hpp"
#include "goliath/stats.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace goliath {

namespace {

struct SeedInfo {
    PredictionDistribution pred;
    std::vector<double> residuals;
    double residual_h = 0.0;
};

double shift_sign(double seed_mean, double synth_mean, Rng& rng) {
    if (seed_mean > synth_mean) return 1.0;
    if (seed_mean < synth_mean) return -1.0;
    return rng.uniform() < 0.5 ? -1.0 : 1.0;
}

} // namespace

void TargetConfig::validate() const {
    if (method < 0 || method > kMaxTargetMethod) {
        throw std::invalid_argument("target method must be in 0.." + std::to_string(kMaxTargetMethod));
    }
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be non-negative");
    if (!(pert > 0.0) || !std::isfinite(pert)) throw std::invalid_argument("pert must be positive");
}

std::vector<double> generate_targets(const TargetConfig& cfg, const Dataset& ds, const SynthesisResult& synth,
                                     const ForestModel* model, std::span<const double> weights, Rng& rng) {
    cfg.validate();
    const auto tcol = ds.target_column();
    if (!tcol) throw std::invalid_argument("generate_targets: dataset has no target column");
    const auto out_t = synth.data.target_column();
    if (!out_t) throw std::invalid_argument("generate_targets: synthesis result has no target column");
    if (cfg.method > 0 && model == nullptr) throw std::invalid_argument("generate_targets: method needs a model");
    if (!weights.empty() && weights.size() != ds.rows()) {
        throw std::invalid_argument("generate_targets: weights do not match the row count");
    }
    const auto y = ds.target();
    const Matrix x = ds.covariates();
    const Matrix xs = synth.data.covariates();
    const std::size_t rows = synth.data.rows();
    if (synth.seed_index.size() != rows || synth.is_synthetic.size() != rows) {
        throw std::invalid_argument("generate_targets: malformed synthesis result");
    }

    std::vector<double> out(rows);
    for (std::size_t r = 0; r < rows; ++r) out[r] = synth.data.values()(r, *out_t);
    if (cfg.method == 0) {
        for (std::size_t r = 0; r < rows; ++r) {
            if (synth.is_synthetic[r]) out[r] = y[synth.seed_index[r]];
        }
        return out;
    }

    // Seed-level quantities, computed once per distinct synthetic seed.
    std::map<std::size_t, SeedInfo> info;
    for (std::size_t r = 0; r < rows; ++r) {
        if (synth.is_synthetic[r]) info.try_emplace(synth.seed_index[r]);
    }
    std::vector<std::map<std::size_t, SeedInfo>::iterator> slots;
    for (auto it = info.begin(); it != info.end(); ++it) slots.push_back(it);
    parallel_for(slots.size(), [&](std::size_t k) {
        const std::size_t s = slots[k]->first;
        SeedInfo& si = slots[k]->second;
        si.pred = predict_distribution(*model, x.row(s));
        si.residuals.resize(si.pred.per_tree.size());
        for (std::size_t t = 0; t < si.residuals.size(); ++t) si.residuals[t] = y[s] - si.pred.per_tree[t];
        if (cfg.method == 3) si.residual_h = stats::silverman_bandwidth(si.residuals);
    });

    double scale = 0.0;
    if (cfg.method == 4 || cfg.method == 5) {
        std::vector<double> w(weights.begin(), weights.end());
        if (w.empty()) w.assign(ds.rows(), 1.0);
        scale = cfg.method == 4 ? stats::weighted_stddev(y, w) * cfg.pert
                                : stats::weighted_silverman_bandwidth(y, w);
    }

    parallel_for(rows, [&](std::size_t r) {
        if (!synth.is_synthetic[r]) return;
        const std::size_t s = synth.seed_index[r];
        const SeedInfo& si = info.at(s);
        Rng g = rng.split(r);
        const double synth_mean = model->predict_mean(xs.row(r));
        switch (cfg.method) {
        case 1: {
            const double e = si.residuals[g.uniform_index(si.residuals.size())];
            const double v = 1.0 + cfg.sigma * g.normal();
            out[r] = y[s] + std::abs(e) * v * shift_sign(si.pred.mean, synth_mean, g);
            break;
        }
        case 2: out[r] = y[s] + (synth_mean - si.pred.mean); break;
        case 3: {
            const double e = si.residual_h * g.normal();
            const double v = 1.0 + cfg.sigma * g.normal();
            out[r] = y[s] + std::abs(e) * v * shift_sign(si.pred.mean, synth_mean, g);
            break;
        }
        case 4:
        case 5: {
            const double e = scale * g.normal();
            out[r] = y[s] + std::abs(e) * shift_sign(si.pred.mean, synth_mean, g);
            break;
        }
        default: break;
        }
    });
    return out;
}

SynthesisResult with_targets(const SynthesisResult& synth, std::span<const double> y) {
    const auto t = synth.data.target_column();
    if (!t) throw std::invalid_argument("with_targets: no target column");
    if (y.size() != synth.data.rows()) throw std::invalid_argument("with_targets: length mismatch");
    Matrix values = synth.data.values();
    const VariableKind kind = synth.data.schema()[*t].kind;
    SynthesisResult out = synth;
    for (std::size_t r = 0; r < y.size(); ++r) {
        if (!std::isfinite(y[r])) throw std::invalid_argument("with_targets: non-finite target");
        values(r, *t) = kind.project(y[r]);
        out.targets_projected += values(r, *t) != y[r];
    }
    out.data = Dataset(synth.data.schema(), std::move(values));
    return out;
}

} // namespace goliath
