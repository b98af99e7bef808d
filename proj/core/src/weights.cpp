#include "goliath/weights.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/special.hpp"
#include "goliath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace goliath {

std::string to_string(WeightMode mode) {
    switch (mode) {
    case WeightMode::Inverse: return "inverse";
    case WeightMode::InverseSquared: return "inverse2";
    case WeightMode::Uniform: return "uniform";
    case WeightMode::User: return "user";
    }
    return "uniform";
}

WeightMode parse_weight_mode(const std::string& text) {
    if (text == "inverse") return WeightMode::Inverse;
    if (text == "inverse2" || text == "inverse-squared") return WeightMode::InverseSquared;
    if (text == "uniform") return WeightMode::Uniform;
    if (text == "user" || text == "file") return WeightMode::User;
    throw std::invalid_argument("unknown weight mode '" + text + "'");
}

std::vector<double> target_density(std::span<const double> y) {
    const double h = stats::silverman_bandwidth(y);
    if (!(h > 0.0)) return {};
    const std::size_t n = y.size();
    std::vector<double> f(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += special::normal_pdf((y[i] - y[j]) / h);
        f[i] = acc / (static_cast<double>(n) * h);
    }
    return f;
}

DrawingWeights uniform_weights(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_weights: n must be positive");
    DrawingWeights out;
    out.w.assign(n, 1.0 / static_cast<double>(n));
    out.mode = WeightMode::Uniform;
    return out;
}

DrawingWeights user_weights(std::span<const double> raw) {
    if (raw.empty()) throw std::invalid_argument("user_weights: empty weight vector");
    double total = 0.0;
    for (double v : raw) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("user_weights: weights must be finite and non-negative");
        }
        total += v;
    }
    if (!(total > 0.0)) throw std::invalid_argument("user_weights: weights must have a positive sum");
    DrawingWeights out;
    out.w.assign(raw.begin(), raw.end());
    for (double& v : out.w) v /= total;
    out.mode = WeightMode::User;
    return out;
}

DrawingWeights inverse_kde_weights(std::span<const double> y, WeightMode mode, double trim_factor) {
    if (y.size() < 2) throw std::invalid_argument("inverse_kde_weights: need at least 2 values");
    if (!(trim_factor >= 1.0)) throw std::invalid_argument("trim factor must be at least 1");
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("inverse_kde_weights: non-finite target");
    }
    if (mode == WeightMode::Uniform) {
        auto out = uniform_weights(y.size());
        out.trim_factor = trim_factor;
        return out;
    }
    if (mode == WeightMode::User) {
        throw std::invalid_argument("inverse_kde_weights: user weights are supplied, not estimated");
    }
    const auto f = target_density(y);
    if (f.empty()) {
        warn("constant target; drawing weights are uniform");
        auto out = uniform_weights(y.size());
        out.trim_factor = trim_factor;
        return out;
    }

    DrawingWeights out;
    out.mode = mode;
    out.trim_factor = trim_factor;
    out.w.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out.w[i] = mode == WeightMode::Inverse ? 1.0 / f[i] : 1.0 / (f[i] * f[i]);
    }
    // Cap tau solves tau = trim * median(min(w, tau)). For odd n, or when the
    // cap sits above both middle values, this is trim * median(w). Otherwise
    // clipping lowers the upper middle value to tau and the median with it.
    std::vector<double> sorted = out.w;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double cap = trim_factor * stats::median(out.w);
    if (n % 2 == 0 && cap < sorted[n / 2]) cap = trim_factor * sorted[n / 2 - 1] / (2.0 - trim_factor);
    for (double& v : out.w) v = std::min(v, cap);
    const double total = std::accumulate(out.w.begin(), out.w.end(), 0.0);
    for (double& v : out.w) v /= total;
    // Division can round the clipped values an ulp above the bound.
    for (int pass = 0; pass < 64; ++pass) {
        const double norm_cap = trim_factor * stats::median(out.w);
        bool clipped = false;
        for (double& v : out.w) {
            if (v > norm_cap) {
                v = norm_cap;
                clipped = true;
            }
        }
        if (!clipped) break;
    }
    return out;
}

std::vector<std::size_t> draw_seeds(const DrawingWeights& w, std::size_t n_draws, Rng& rng) {
    if (n_draws == 0) throw std::invalid_argument("draw_seeds: N must be positive");
    if (w.w.empty()) throw std::invalid_argument("draw_seeds: empty weights");
    std::vector<double> cum(w.w.size());
    std::partial_sum(w.w.begin(), w.w.end(), cum.begin());
    const double total = cum.back();
    if (!(total > 0.0)) throw std::invalid_argument("draw_seeds: weights must have a positive sum");
    std::vector<std::size_t> seeds(n_draws);
    for (auto& s : seeds) {
        const double u = rng.uniform() * total;
        // First index whose cumulative mass exceeds u; zero-weight rows are never hit.
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        auto idx = static_cast<std::size_t>(it - cum.begin());
        if (idx == w.w.size()) {
            idx = w.w.size() - 1;
            while (w.w[idx] == 0.0) --idx;
        }
        s = idx;
    }
    return seeds;
}

} // namespace goliath
