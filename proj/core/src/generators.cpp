#include "goliath/generators.hpp"

#include "goliath/bandwidth.hpp"
#include "goliath/clustering.hpp"
#include "goliath/diagnostics.hpp"
#include "goliath/parallel.hpp"
#include "goliath/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace goliath {

namespace {

constexpr std::uint64_t kClusterStream = 0;
constexpr std::uint64_t kSeedStream = 1;
constexpr std::uint64_t kRowStream = 2;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Local generation state: either the whole sample or one GMM cluster.
struct Context {
    std::vector<std::size_t> members; // global row indices
    Matrix x;                         // covariates of the members
    std::vector<double> h;            // CSB / ROSE / GN per-column sd
    std::vector<FittedKernel> kernels;
    NeighborTable nt;
    std::vector<double> sigma; // eNNSB
};

std::size_t min_context_size(const GeneratorConfig& cfg) {
    return is_interpolation(cfg.family) ? cfg.k + 1 : 2;
}

Context build_context(const Matrix& x_all, std::vector<std::size_t> members,
                      const std::vector<ColumnSchema>& schema, const GeneratorConfig& cfg) {
    Context ctx;
    ctx.members = std::move(members);
    ctx.x = x_all.select_rows(ctx.members);
    const std::size_t n = ctx.x.rows();
    const std::size_t p = ctx.x.cols();
    const double nm = cfg.resolved_noise_mult();
    auto frozen = [&](std::size_t j) {
        return std::find(cfg.frozen_columns.begin(), cfg.frozen_columns.end(), schema[j].name) !=
               cfg.frozen_columns.end();
    };
    auto override_h = [&](std::size_t j) -> std::optional<double> {
        const auto it = cfg.bandwidths.find(schema[j].name);
        if (it == cfg.bandwidths.end()) return std::nullopt;
        return it->second;
    };

    switch (cfg.family) {
    case Family::OS: break;
    case Family::CSB:
    case Family::ROSE:
    case Family::GN:
        ctx.h.resize(p);
        for (std::size_t j = 0; j < p; ++j) {
            if (frozen(j)) continue;
            const auto col = ctx.x.column(j);
            if (cfg.family == Family::CSB) {
                ctx.h[j] = override_h(j).value_or(stats::silverman_bandwidth(col) * nm);
            } else if (cfg.family == Family::ROSE) {
                ctx.h[j] = rose_bandwidth(n, p, stats::stddev(col)) * nm;
            } else {
                ctx.h[j] = nm * stats::stddev(col);
            }
        }
        break;
    case Family::NCSB:
        ctx.kernels.resize(p);
        for (std::size_t j = 0; j < p; ++j) {
            if (frozen(j)) {
                ctx.kernels[j] = FittedKernel(KernelKind::dirac(), 0.0);
                continue;
            }
            const KernelKind kind = kernel_for(schema[j].kind);
            if (const auto h = override_h(j)) {
                ctx.kernels[j] = FittedKernel(kind, *h);
            } else {
                ctx.kernels[j] = fit_kernel(kind, ctx.x.column(j), nm);
            }
        }
        break;
    case Family::SMOTE:
    case Family::NNSB:
    case Family::ENNSB:
        ctx.nt = knn(ctx.x, cfg.k, cfg.distance, cfg.standardize);
        if (cfg.family == Family::ENNSB) {
            ctx.sigma.resize(p);
            for (std::size_t j = 0; j < p; ++j) {
                if (frozen(j)) continue;
                ctx.sigma[j] = cfg.sigma_extend ? *cfg.sigma_extend
                                                : stats::silverman_bandwidth(ctx.x.column(j)) * nm;
            }
        }
        break;
    }
    return ctx;
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

// Partition rows into generation contexts; returns contexts and, per row, its context.
std::vector<Context> make_contexts(const Dataset& ds, const Matrix& x, const GeneratorConfig& cfg,
                                   const std::vector<ColumnSchema>& schema, Rng& rng,
                                   std::vector<std::size_t>& context_of) {
    const std::size_t n = x.rows();
    context_of.assign(n, 0);
    std::vector<Context> contexts;
    if (!cfg.clustering) {
        contexts.push_back(build_context(x, all_rows(n), schema, cfg));
        return contexts;
    }

    Matrix features;
    if (cfg.cluster_on_target) {
        if (!ds.target_column()) throw std::invalid_argument("clustering on the target needs a target column");
        const auto y = ds.target();
        features = Matrix(n, 1, y);
    } else {
        features = x;
    }
    features = standardize_columns(features);
    Rng cluster_rng = rng.split(kClusterStream);
    const std::size_t m = std::min(cfg.max_components, n - 1);
    const auto model = fit_gmm(features, m, cluster_rng);
    const auto labels = assign(model, features);

    std::vector<std::vector<std::size_t>> groups(model.n_components());
    for (std::size_t i = 0; i < n; ++i) groups[labels[i]].push_back(i);

    // Rows of clusters too small to generate in are served by a global context.
    std::vector<std::size_t> orphans;
    for (auto& g : groups) {
        if (g.empty()) continue;
        if (g.size() < min_context_size(cfg)) {
            orphans.insert(orphans.end(), g.begin(), g.end());
            continue;
        }
        for (std::size_t i : g) context_of[i] = contexts.size();
        contexts.push_back(build_context(x, g, schema, cfg));
    }
    if (!orphans.empty()) {
        warn("cluster smaller than the minimum size; " + std::to_string(orphans.size()) +
             " rows generate from the whole sample");
        const std::size_t global = contexts.size();
        for (std::size_t i : orphans) context_of[i] = global;
        contexts.push_back(build_context(x, all_rows(n), schema, cfg));
    }
    return contexts;
}

double gaussian_noise(double x, double h, Rng& rng) {
    const double z = rng.normal();
    return h > 0.0 ? x + h * z : x;
}

std::size_t pick_neighbor(const NeighborTable& nt, std::size_t seed, NeighborWeighting weighting, Rng& rng,
                          bool* fell_back) {
    const std::size_t k = nt.k;
    if (weighting == NeighborWeighting::Uniform) return rng.uniform_index(k);
    std::vector<double> w(k);
    if (weighting == NeighborWeighting::DistanceProportional) {
        for (std::size_t l = 0; l < k; ++l) w[l] = nt.dist(seed, l);
    } else {
        // A zero distance has infinite inverse weight: choose among the coincident neighbours.
        bool any_zero = false;
        for (std::size_t l = 0; l < k; ++l) any_zero = any_zero || nt.dist(seed, l) == 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            const double d = nt.dist(seed, l);
            w[l] = any_zero ? (d == 0.0 ? 1.0 : 0.0) : 1.0 / d;
        }
    }
    double total = 0.0;
    for (double v : w) total += v;
    if (!(total > 0.0) || !std::isfinite(total)) {
        if (fell_back) *fell_back = true;
        return rng.uniform_index(k);
    }
    const double u = rng.uniform() * total;
    double cum = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        cum += w[l];
        if (u < cum) return l;
    }
    for (std::size_t l = k; l-- > 0;) {
        if (w[l] > 0.0) return l;
    }
    return k - 1;
}

std::vector<double> interpolate(std::span<const double> a, std::span<const double> b, double lambda) {
    std::vector<double> out(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = lambda * a[j] + (1.0 - lambda) * b[j];
    return out;
}

void require_seed(std::size_t seed, const NeighborTable& nt, const Matrix& x) {
    if (nt.k == 0) throw std::invalid_argument("neighbour table has k = 0");
    if (seed >= x.rows() || seed >= nt.rows()) throw std::out_of_range("seed index out of range");
}

} // namespace

std::string to_string(Family f) {
    switch (f) {
    case Family::OS: return "OS";
    case Family::CSB: return "CSB";
    case Family::NCSB: return "NCSB";
    case Family::ROSE: return "ROSE";
    case Family::GN: return "GN";
    case Family::SMOTE: return "SMOTE";
    case Family::NNSB: return "NNSB";
    case Family::ENNSB: return "eNNSB";
    }
    return "NCSB";
}

std::string to_string(OutputMode m) {
    switch (m) {
    case OutputMode::Synth: return "synth";
    case OutputMode::Augment: return "augment";
    case OutputMode::Mix: return "mix";
    }
    return "mix";
}

std::string to_string(NeighborWeighting w) {
    switch (w) {
    case NeighborWeighting::Uniform: return "uniform";
    case NeighborWeighting::DistanceProportional: return "distance";
    case NeighborWeighting::InverseDistance: return "inverse-distance";
    }
    return "uniform";
}

Family parse_family(const std::string& text) {
    std::string up;
    for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (up == "OS") return Family::OS;
    if (up == "CSB") return Family::CSB;
    if (up == "NCSB") return Family::NCSB;
    if (up == "ROSE") return Family::ROSE;
    if (up == "GN") return Family::GN;
    if (up == "SMOTE") return Family::SMOTE;
    if (up == "NNSB") return Family::NNSB;
    if (up == "ENNSB") return Family::ENNSB;
    throw std::invalid_argument("unknown generator family '" + text + "'");
}

OutputMode parse_output_mode(const std::string& text) {
    if (text == "synth") return OutputMode::Synth;
    if (text == "augment") return OutputMode::Augment;
    if (text == "mix") return OutputMode::Mix;
    throw std::invalid_argument("unknown output mode '" + text + "'");
}

NeighborWeighting parse_neighbor_weighting(const std::string& text) {
    if (text == "uniform") return NeighborWeighting::Uniform;
    if (text == "distance" || text == "distance-proportional") return NeighborWeighting::DistanceProportional;
    if (text == "inverse-distance") return NeighborWeighting::InverseDistance;
    throw std::invalid_argument("unknown neighbour weighting '" + text + "'");
}

bool is_interpolation(Family f) noexcept {
    return f == Family::SMOTE || f == Family::NNSB || f == Family::ENNSB;
}

double GeneratorConfig::resolved_noise_mult() const {
    if (noise_mult) return *noise_mult;
    return family == Family::GN ? 0.1 : 1.0;
}

void GeneratorConfig::validate() const {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (noise_mult && !(*noise_mult > 0.0 && std::isfinite(*noise_mult))) {
        throw std::invalid_argument("noise multiplier must be positive");
    }
    if (!(alpha > 0.0 && std::isfinite(alpha)) || !(beta > 0.0 && std::isfinite(beta))) {
        throw std::invalid_argument("alpha and beta must be positive");
    }
    if (sigma_extend && !(*sigma_extend >= 0.0 && std::isfinite(*sigma_extend))) {
        throw std::invalid_argument("sigma_extend must be non-negative");
    }
    if (n_synthetic == 0 && mode != OutputMode::Augment) {
        throw std::invalid_argument("N must be positive unless mode is augment");
    }
    if (max_components == 0) throw std::invalid_argument("max_components must be positive");
    for (const auto& [name, h] : bandwidths) {
        if (!(h > 0.0 && std::isfinite(h))) throw std::invalid_argument("bandwidth for " + name + " must be positive");
    }
}

double rose_bandwidth(std::size_t n, std::size_t p, double sigma) {
    if (n == 0) throw std::invalid_argument("rose_bandwidth: n must be positive");
    const auto pd = static_cast<double>(p);
    return std::pow(4.0 / ((pd + 2.0) * static_cast<double>(n)), 1.0 / (pd + 4.0)) * sigma;
}

std::vector<double> sample_csb(std::span<const double> seed_row, std::span<const double> h, Rng& rng) {
    if (h.size() != seed_row.size()) throw std::invalid_argument("sample_csb: bandwidth count mismatch");
    std::vector<double> out(seed_row.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = gaussian_noise(seed_row[j], h[j], rng);
    return out;
}

std::vector<double> sample_ncsb(std::span<const double> seed_row, std::span<const FittedKernel> kernels,
                                Rng& rng) {
    if (kernels.size() != seed_row.size()) throw std::invalid_argument("sample_ncsb: kernel count mismatch");
    std::vector<double> out(seed_row.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = kernel_sample(kernels[j], seed_row[j], rng);
    return out;
}

std::vector<double> sample_ncsb(std::span<const double> seed_row, std::span<const FittedKernel> kernels,
                                std::span<const VariableKind> kinds, Rng& rng) {
    if (kinds.size() != kernels.size()) throw std::invalid_argument("sample_ncsb: kind count mismatch");
    for (std::size_t j = 0; j < kinds.size(); ++j) {
        if (!compatible(kernels[j].kind, kinds[j])) {
            throw std::invalid_argument("kernel " + kernels[j].kind.name() + " does not serve support " +
                                        kinds[j].to_string());
        }
    }
    return sample_ncsb(seed_row, kernels, rng);
}

std::vector<double> sample_rose(std::span<const double> seed_row, std::span<const double> sigma_hat,
                                std::size_t n, std::size_t p, double noise_mult, Rng& rng) {
    if (sigma_hat.size() != seed_row.size()) throw std::invalid_argument("sample_rose: sd count mismatch");
    std::vector<double> h(sigma_hat.size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = rose_bandwidth(n, p, sigma_hat[j]) * noise_mult;
    return sample_csb(seed_row, h, rng);
}

std::vector<double> sample_gn(std::span<const double> seed_row, std::span<const double> sigma_hat,
                              double sigma_noise, Rng& rng) {
    if (sigma_hat.size() != seed_row.size()) throw std::invalid_argument("sample_gn: sd count mismatch");
    std::vector<double> h(sigma_hat.size());
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = sigma_noise * sigma_hat[j];
    return sample_csb(seed_row, h, rng);
}

std::vector<double> sample_smote(std::size_t seed, const NeighborTable& nt, const Matrix& x, Rng& rng) {
    require_seed(seed, nt, x);
    const std::size_t l = rng.uniform_index(nt.k);
    const double lambda = rng.uniform();
    return interpolate(x.row(seed), x.row(nt.index(seed, l)), lambda);
}

std::vector<double> sample_nnsb(std::size_t seed, const NeighborTable& nt, const Matrix& x, double alpha,
                                double beta, NeighborWeighting weighting, Rng& rng, bool* fell_back) {
    require_seed(seed, nt, x);
    const std::size_t l = pick_neighbor(nt, seed, weighting, rng, fell_back);
    const double lambda = rng.beta(alpha, beta);
    return interpolate(x.row(seed), x.row(nt.index(seed, l)), lambda);
}

std::vector<double> sample_ennsb(std::size_t seed, const NeighborTable& nt, const Matrix& x, double alpha,
                                 double beta, std::span<const double> sigma, Rng& rng,
                                 NeighborWeighting weighting) {
    if (sigma.size() != x.cols()) throw std::invalid_argument("sample_ennsb: sigma count mismatch");
    auto theta = sample_nnsb(seed, nt, x, alpha, beta, weighting, rng);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = gaussian_noise(theta[j], sigma[j], rng);
    return theta;
}

SynthesisResult generate(const Dataset& ds, const GeneratorConfig& cfg, const DrawingWeights& w, Rng& rng) {
    cfg.validate();
    if (w.size() != ds.rows()) throw std::invalid_argument("generate: weights do not match the row count");
    std::vector<std::size_t> seeds;
    if (cfg.n_synthetic > 0) {
        Rng seed_rng = rng.split(kSeedStream);
        seeds = draw_seeds(w, cfg.n_synthetic, seed_rng);
    }
    return generate_from_seeds(ds, cfg, seeds, rng);
}

SynthesisResult generate_from_seeds(const Dataset& ds, const GeneratorConfig& cfg,
                                    std::span<const std::size_t> seeds, Rng& rng) {
    cfg.validate();
    const std::size_t n = ds.rows();
    if (seeds.size() != cfg.n_synthetic) throw std::invalid_argument("generate: seed count differs from N");
    for (std::size_t s : seeds) {
        if (s >= n) throw std::out_of_range("generate: seed index out of range");
    }
    const auto schema = ds.covariate_schema();
    for (const auto& name : cfg.frozen_columns) {
        if (std::none_of(schema.begin(), schema.end(), [&](const ColumnSchema& c) { return c.name == name; })) {
            throw std::invalid_argument("frozen column '" + name + "' is not a covariate");
        }
    }
    for (const auto& [name, h] : cfg.bandwidths) {
        const auto it = std::find_if(schema.begin(), schema.end(), [&](const ColumnSchema& c) { return c.name == name; });
        if (it == schema.end()) throw std::invalid_argument("bandwidth column '" + name + "' is not a covariate");
        if (cfg.family == Family::NCSB && it->kind.support == Support::Count && !(h < 1.0)) {
            throw std::invalid_argument("bandwidth for count column '" + name + "' must lie in (0, 1)");
        }
    }
    if (is_interpolation(cfg.family) && cfg.k >= n) {
        throw std::invalid_argument("k must be smaller than the number of rows");
    }
    if (n < 2 && cfg.family != Family::OS) throw std::invalid_argument("generate: need at least 2 rows");

    const Matrix x = ds.covariates();
    const auto& cov_cols = ds.covariate_columns();
    const std::size_t p = x.cols();

    std::vector<std::size_t> context_of;
    std::vector<Context> contexts;
    std::vector<std::size_t> local_of(n, kNone);
    if (!seeds.empty()) {
        contexts = make_contexts(ds, x, cfg, schema, rng, context_of);
        for (std::size_t c = 0; c < contexts.size(); ++c) {
            const auto& members = contexts[c].members;
            for (std::size_t l = 0; l < members.size(); ++l) {
                // The global fallback context also lists rows owned by clusters.
                if (context_of[members[l]] == c) local_of[members[l]] = l;
            }
        }
    }

    // Positions whose row is the original seed (mix mode, first occurrence).
    std::vector<bool> keep_original(seeds.size(), false);
    if (cfg.mode == OutputMode::Mix) {
        std::vector<bool> seen(n, false);
        for (std::size_t t = 0; t < seeds.size(); ++t) {
            if (!seen[seeds[t]]) {
                keep_original[t] = true;
                seen[seeds[t]] = true;
            }
        }
    }

    const Rng row_base = rng.split(kRowStream);
    const bool frozen_any = !cfg.frozen_columns.empty();
    std::vector<bool> frozen(p, false);
    for (std::size_t j = 0; j < p; ++j) {
        frozen[j] = std::find(cfg.frozen_columns.begin(), cfg.frozen_columns.end(), schema[j].name) !=
                    cfg.frozen_columns.end();
    }
    Matrix generated(seeds.size(), p);
    std::atomic<bool> fell_back{false};
    parallel_for(seeds.size(), [&](std::size_t t) {
        const std::size_t s = seeds[t];
        if (keep_original[t] || cfg.family == Family::OS) {
            std::copy(x.row(s).begin(), x.row(s).end(), generated.row(t).begin());
            return;
        }
        Rng r = row_base.split(t);
        const Context& ctx = contexts[context_of[s]];
        const std::size_t ls = local_of[s];
        const auto seed_row = ctx.x.row(ls);
        std::vector<double> out;
        switch (cfg.family) {
        case Family::OS: break;
        case Family::CSB:
        case Family::ROSE:
        case Family::GN: out = sample_csb(seed_row, ctx.h, r); break;
        case Family::NCSB: out = sample_ncsb(seed_row, ctx.kernels, r); break;
        case Family::SMOTE: out = sample_smote(ls, ctx.nt, ctx.x, r); break;
        case Family::NNSB: {
            bool fb = false;
            out = sample_nnsb(ls, ctx.nt, ctx.x, cfg.alpha, cfg.beta, cfg.nn_weighting, r, &fb);
            if (fb) fell_back = true;
            break;
        }
        case Family::ENNSB:
            out = sample_ennsb(ls, ctx.nt, ctx.x, cfg.alpha, cfg.beta, ctx.sigma, r, cfg.nn_weighting);
            break;
        }
        if (frozen_any) {
            for (std::size_t j = 0; j < p; ++j) {
                if (frozen[j]) out[j] = seed_row[j];
            }
        }
        std::copy(out.begin(), out.end(), generated.row(t).begin());
    });
    if (fell_back) warn("all neighbour distances are zero for some seeds; neighbour choice fell back to uniform");

    // Assemble full-width rows: covariates replaced, target copied from the seed.
    const Matrix& values = ds.values();
    const std::size_t width = ds.cols();
    const std::size_t n_out = (cfg.mode == OutputMode::Augment ? n : 0) + seeds.size();
    Matrix out(n_out, width);
    SynthesisResult result{ds, {}, {}, std::vector<std::size_t>(width, 0), cfg, rng.seed()};
    result.seed_index.reserve(n_out);
    result.is_synthetic.reserve(n_out);
    std::size_t r = 0;
    if (cfg.mode == OutputMode::Augment) {
        for (std::size_t i = 0; i < n; ++i, ++r) {
            std::copy(values.row(i).begin(), values.row(i).end(), out.row(r).begin());
            result.seed_index.push_back(i);
            result.is_synthetic.push_back(false);
        }
    }
    for (std::size_t t = 0; t < seeds.size(); ++t, ++r) {
        std::copy(values.row(seeds[t]).begin(), values.row(seeds[t]).end(), out.row(r).begin());
        for (std::size_t j = 0; j < p; ++j) out(r, cov_cols[j]) = generated(t, j);
        result.seed_index.push_back(seeds[t]);
        result.is_synthetic.push_back(!keep_original[t]);
    }

    auto out_schema = ds.schema();
    for (std::size_t c = 0; c < width; ++c) {
        for (std::size_t i = 0; i < n_out; ++i) {
            if (!out_schema[c].kind.contains(out(i, c))) ++result.support_violations[c];
        }
        if (result.support_violations[c] > 0) out_schema[c].kind = VariableKind::real_line();
    }
    result.data = Dataset(std::move(out_schema), std::move(out));
    return result;
}

} // namespace goliath
