#include "goliath/bench.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/parallel.hpp"
#include "goliath/stats.hpp"
#include "goliath/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace goliath {

namespace {

constexpr std::uint64_t kEvalKey = std::uint64_t{1} << 32;

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on" || v == "T") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off" || v == "F") return false;
    throw std::invalid_argument("option " + key + ": expected a boolean, got '" + v + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    const auto d = parse_double(v);
    if (!d) throw std::invalid_argument("option " + key + ": expected a number, got '" + v + "'");
    return *d;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    const double d = parse_real(key, v);
    if (d < 0.0 || std::floor(d) != d) {
        throw std::invalid_argument("option " + key + ": expected a non-negative integer, got '" + v + "'");
    }
    return static_cast<std::size_t>(d);
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "NA"; }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

const char* kMetricNames[] = {"rmse", "wrmse", "mae", "pearson"};
constexpr double Metrics::*kMetricFields[] = {&Metrics::rmse, &Metrics::wrmse, &Metrics::mae, &Metrics::pearson};

} // namespace

MethodSpec preset_method(const std::string& name) {
    MethodSpec spec;
    spec.name = name;
    if (name == "FTrain") {
        spec.kind = MethodKind::FullTrain;
        return spec;
    }
    if (name == "Imb") {
        spec.kind = MethodKind::Imbalanced;
        return spec;
    }
    auto& g = spec.pipeline.generator;
    g.mode = OutputMode::Mix;
    if (name == "G-OS") g.family = Family::OS;
    else if (name == "G-CSB") g.family = Family::CSB;
    else if (name == "G-NCSB") g.family = Family::NCSB;
    else if (name == "G-ROSE") g.family = Family::ROSE;
    else if (name == "G-GN") g.family = Family::GN;
    else if (name == "G-SMOTE") g.family = Family::SMOTE;
    else if (name == "G-NNSB" || name == "G-NNSBw" || name == "G-eNNSB") {
        g.family = name == "G-eNNSB" ? Family::ENNSB : Family::NNSB;
        g.alpha = 2.0;
        g.beta = 2.0;
        if (name == "G-NNSBw") g.nn_weighting = NeighborWeighting::DistanceProportional;
    } else if (name == "G-GNwCl") {
        g.family = Family::GN;
        g.clustering = true;
    } else if (name == "G-ROSEwCl") {
        g.family = Family::ROSE;
        g.clustering = true;
    } else {
        throw std::invalid_argument("unknown method preset '" + name + "'");
    }
    return spec;
}

std::vector<std::string> preset_names() {
    return {"FTrain", "Imb",    "G-OS",   "G-CSB",   "G-NCSB",  "G-ROSE",   "G-GN",
            "G-SMOTE", "G-NNSB", "G-NNSBw", "G-eNNSB", "G-GNwCl", "G-ROSEwCl"};
}

void apply_method_option(MethodSpec& spec, const std::string& raw_key, const std::string& v) {
    const std::string key = normalize_key(raw_key);
    auto& g = spec.pipeline.generator;
    auto& t = spec.pipeline.target;
    if (spec.kind != MethodKind::Goliath) {
        throw std::invalid_argument("method " + spec.name + " is a baseline and takes no options");
    }
    if (key == "family") g.family = parse_family(v);
    else if (key == "k") g.k = parse_count(key, v);
    else if (key == "noise_mult") g.noise_mult = parse_real(key, v);
    else if (key == "alpha") g.alpha = parse_real(key, v);
    else if (key == "beta") g.beta = parse_real(key, v);
    else if (key == "sigma_extend") {
        if (v == "auto") g.sigma_extend.reset();
        else g.sigma_extend = parse_real(key, v);
    } else if (key == "nn_weighting") g.nn_weighting = parse_neighbor_weighting(v);
    else if (key == "distance") g.distance = parse_distance(v);
    else if (key == "standardize") g.standardize = parse_bool(key, v);
    else if (key == "mode") g.mode = parse_output_mode(v);
    else if (key == "cluster") g.clustering = parse_bool(key, v);
    else if (key == "max_components") g.max_components = parse_count(key, v);
    else if (key == "cluster_on_target") g.cluster_on_target = parse_bool(key, v);
    else if (key == "method_y") t.method = static_cast<int>(parse_count(key, v));
    else if (key == "sigma") t.sigma = parse_real(key, v);
    else if (key == "pert") t.pert = parse_real(key, v);
    else if (key == "weights") {
        const auto mode = parse_weight_mode(v);
        if (mode == WeightMode::User) throw std::invalid_argument("benchmark methods cannot use user weights");
        spec.pipeline.weights = mode;
    } else if (key == "trim") spec.pipeline.trim = parse_real(key, v);
    else if (key == "n_ratio") {
        spec.n_ratio = parse_real(key, v);
        if (!(spec.n_ratio > 0.0)) throw std::invalid_argument("n_ratio must be positive");
    } else {
        throw std::invalid_argument("unknown method option '" + raw_key + "'");
    }
}

void BenchmarkConfig::validate() const {
    if (!(test_prop > 0.0 && test_prop < 1.0)) throw std::invalid_argument("test_prop must lie in (0, 1)");
    if (!(imb_prop > 0.0 && imb_prop <= 1.0)) throw std::invalid_argument("imb_prop must lie in (0, 1]");
    if (n_runs == 0) throw std::invalid_argument("n_runs must be positive");
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    if (learners.empty()) throw std::invalid_argument("at least one learner is required");
    if (!(trim >= 1.0)) throw std::invalid_argument("trim factor must be at least 1");
    for (const auto& m : methods) {
        if (m.kind == MethodKind::Goliath) {
            m.pipeline.target.validate();
            if (!(m.n_ratio > 0.0)) throw std::invalid_argument("n_ratio must be positive");
        }
    }
}

std::vector<std::size_t> weighted_sample_without_replacement(std::span<const double> w, std::size_t m, Rng& rng) {
    std::size_t positive = 0;
    for (double v : w) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("sampling weights must be non-negative");
        if (v > 0.0) ++positive;
    }
    if (m > positive) throw std::invalid_argument("cannot draw more rows than have positive weight");
    // Key log(u)/w: the m largest keys form a weighted sample without replacement.
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double u = rng.uniform_open();
        if (w[i] > 0.0) keys.emplace_back(std::log(u) / w[i], i);
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(m), keys.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    std::vector<std::size_t> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = keys[i].second;
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Split> make_splits(const Dataset& ds, const BenchmarkConfig& cfg, Rng& rng) {
    cfg.validate();
    if (!ds.target_column()) throw std::invalid_argument("benchmark needs a target column");
    const auto y = ds.target();
    const std::size_t n = ds.rows();
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.test_prop));
    if (n_test < kMinSplitRows) throw std::invalid_argument("test set would have fewer than 20 rows");
    const std::size_t n_rest = n - n_test;
    const auto n_imb = static_cast<std::size_t>(std::llround(static_cast<double>(n_rest) * cfg.imb_prop));
    if (n_imb < kMinSplitRows) throw std::invalid_argument("imbalanced train would have fewer than 20 rows");

    const auto test_w = inverse_kde_weights(y, WeightMode::Inverse, cfg.trim).w;
    std::vector<Split> splits(cfg.n_runs);
    for (std::size_t r = 0; r < cfg.n_runs; ++r) {
        Rng run_rng = rng.split(r);
        Split& s = splits[r];
        s.test = weighted_sample_without_replacement(test_w, n_test, run_rng);
        std::vector<bool> in_test(n, false);
        for (std::size_t i : s.test) in_test[i] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_test[i]) s.train_full.push_back(i);
        }
        std::vector<double> y_rest(s.train_full.size());
        for (std::size_t i = 0; i < y_rest.size(); ++i) y_rest[i] = y[s.train_full[i]];
        auto f = target_density(y_rest);
        std::vector<double> w(y_rest.size(), 1.0);
        if (!f.empty()) {
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = cfg.inverse_squared_train ? 1.0 / (f[i] * f[i]) : f[i] * f[i];
        }
        const auto picked = weighted_sample_without_replacement(w, n_imb, run_rng);
        s.train_imbalanced.reserve(n_imb);
        for (std::size_t i : picked) s.train_imbalanced.push_back(s.train_full[i]);
    }
    return splits;
}

Metrics compute_metrics(std::span<const double> pred, std::span<const double> truth,
                        std::span<const double> weights) {
    if (pred.size() != truth.size() || pred.empty()) throw std::invalid_argument("metrics: length mismatch");
    if (!weights.empty() && weights.size() != truth.size()) throw std::invalid_argument("metrics: weight mismatch");
    double sq = 0.0;
    double ab = 0.0;
    double wsq = 0.0;
    double wsum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - truth[i];
        sq += e * e;
        ab += std::abs(e);
        const double w = weights.empty() ? 1.0 : weights[i];
        wsq += w * e * e;
        wsum += w;
    }
    const auto n = static_cast<double>(pred.size());
    Metrics m;
    m.rmse = std::sqrt(sq / n);
    m.mae = ab / n;
    m.wrmse = std::sqrt(wsq / wsum);
    m.pearson = pred.size() >= 2 ? stats::pearson(pred, truth) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

BenchmarkReport evaluate(const Dataset& ds, const std::vector<Split>& splits, const BenchmarkConfig& cfg,
                         Rng& rng) {
    cfg.validate();
    const std::size_t n_methods = cfg.methods.size();
    const std::size_t n_learners = cfg.learners.size();
    BenchmarkReport report;
    for (const auto& m : cfg.methods) report.methods.push_back(m.name);
    for (auto l : cfg.learners) report.learners.push_back(to_string(l));
    report.n_runs = splits.size();
    report.records.resize(splits.size() * n_methods * n_learners);
    report.aggregated.assign(splits.size(), std::vector<MetricRecord>(n_methods));
    report.ranks.assign(splits.size(), std::vector<double>(n_methods, 0.0));

    const Matrix x_all = ds.covariates();
    const auto y_all = ds.target();

    parallel_for(splits.size(), [&](std::size_t r) {
        const Split& split = splits[r];
        const Rng run_rng = rng.split(kEvalKey | r);
        const Matrix x_test = x_all.select_rows(split.test);
        std::vector<double> y_test(split.test.size());
        for (std::size_t i = 0; i < y_test.size(); ++i) y_test[i] = y_all[split.test[i]];
        const auto test_w = inverse_kde_weights(y_test, WeightMode::Inverse, cfg.trim).w;

        for (std::size_t m = 0; m < n_methods; ++m) {
            const MethodSpec& spec = cfg.methods[m];
            Matrix x_train;
            std::vector<double> y_train;
            bool built = true;
            try {
                if (spec.kind == MethodKind::FullTrain || spec.kind == MethodKind::Imbalanced) {
                    const auto& rows = spec.kind == MethodKind::FullTrain ? split.train_full : split.train_imbalanced;
                    x_train = x_all.select_rows(rows);
                    y_train.resize(rows.size());
                    for (std::size_t i = 0; i < rows.size(); ++i) y_train[i] = y_all[rows[i]];
                } else {
                    const Dataset train = ds.select_rows(split.train_imbalanced);
                    PipelineConfig pc = spec.pipeline;
                    pc.generator.n_synthetic = std::max<std::size_t>(
                        1, static_cast<std::size_t>(std::llround(spec.n_ratio * static_cast<double>(train.rows()))));
                    Rng method_rng = run_rng.split(m);
                    const auto result = synthesize(train, pc, method_rng);
                    x_train = result.data.covariates();
                    y_train = result.data.target();
                }
            } catch (const std::exception& e) {
                warn("run " + std::to_string(r + 1) + ", method " + spec.name + ": " + e.what());
                built = false;
            }

            MetricRecord& agg = report.aggregated[r][m];
            agg.run = r;
            agg.method = m;
            agg.ok = built;
            std::size_t n_ok = 0;
            for (std::size_t l = 0; l < n_learners; ++l) {
                MetricRecord& rec = report.records[(r * n_methods + m) * n_learners + l];
                rec.run = r;
                rec.method = m;
                rec.learner = l;
                if (!built) continue;
                try {
                    auto learner = make_learner(cfg.learners[l], stream_seed(run_rng.seed(), 1000 + l));
                    learner->fit(x_train, y_train);
                    const auto pred = learner->predict(x_test);
                    if (std::any_of(pred.begin(), pred.end(), [](double v) { return !std::isfinite(v); })) {
                        throw std::runtime_error("non-finite prediction");
                    }
                    rec.metrics = compute_metrics(pred, y_test, test_w);
                    rec.ok = true;
                } catch (const std::exception& e) {
                    warn("run " + std::to_string(r + 1) + ", method " + spec.name + ", learner " +
                         report.learners[l] + ": " + e.what());
                }
                if (!rec.ok) {
                    agg.ok = false;
                    continue;
                }
                ++n_ok;
                for (auto field : kMetricFields) agg.metrics.*field += rec.metrics.*field;
            }
            for (auto field : kMetricFields) {
                agg.metrics.*field = n_ok > 0 ? agg.metrics.*field / static_cast<double>(n_ok)
                                              : std::numeric_limits<double>::quiet_NaN();
            }
        }

        std::vector<double> rmse(n_methods);
        for (std::size_t m = 0; m < n_methods; ++m) {
            const auto& agg = report.aggregated[r][m];
            rmse[m] = agg.ok ? agg.metrics.rmse : std::numeric_limits<double>::infinity();
        }
        report.ranks[r] = stats::average_ranks(rmse);
    });
    return report;
}

BenchmarkReport run_benchmark(const Dataset& ds, const BenchmarkConfig& cfg) {
    Rng rng(cfg.seed);
    const auto splits = make_splits(ds, cfg, rng);
    return evaluate(ds, splits, cfg, rng);
}

double BenchmarkReport::mean_rank(std::size_t method) const {
    double s = 0.0;
    for (const auto& run : ranks) s += run[method];
    return s / static_cast<double>(ranks.size());
}

double BenchmarkReport::mean_metric(std::size_t method, double Metrics::*field) const {
    double s = 0.0;
    std::size_t k = 0;
    for (const auto& run : aggregated) {
        if (!run[method].ok) continue;
        s += run[method].metrics.*field;
        ++k;
    }
    return k > 0 ? s / static_cast<double>(k) : std::numeric_limits<double>::quiet_NaN();
}

void BenchmarkReport::write_metrics_csv(const std::filesystem::path& path) const {
    std::ostringstream out;
    out << "run,method,learner,metric,value\n";
    for (const auto& rec : records) {
        for (std::size_t k = 0; k < 4; ++k) {
            out << rec.run + 1 << ',' << methods[rec.method] << ',' << learners[rec.learner] << ','
                << kMetricNames[k] << ',' << (rec.ok ? csv_number(rec.metrics.*kMetricFields[k]) : "NA") << '\n';
        }
    }
    write_file(path, out.str());
}

void BenchmarkReport::write_ranks_csv(const std::filesystem::path& path) const {
    std::ostringstream out;
    out << "run,method,rmse,wrmse,mae,pearson,rank\n";
    for (std::size_t r = 0; r < aggregated.size(); ++r) {
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const auto& agg = aggregated[r][m];
            out << r + 1 << ',' << methods[m];
            for (auto field : kMetricFields) out << ',' << (agg.ok ? csv_number(agg.metrics.*field) : "NA");
            out << ',' << csv_number(ranks[r][m]) << '\n';
        }
    }
    write_file(path, out.str());
}

void BenchmarkReport::write_rank_heatmap_csv(const std::filesystem::path& path) const {
    std::ostringstream out;
    out << "method";
    for (std::size_t r = 0; r < ranks.size(); ++r) out << ",run_" << r + 1;
    out << ",mean_rank\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
        out << methods[m];
        for (const auto& run : ranks) out << ',' << csv_number(run[m]);
        out << ',' << csv_number(mean_rank(m)) << '\n';
    }
    write_file(path, out.str());
}

std::string BenchmarkReport::summary() const {
    std::size_t width = 6;
    for (const auto& m : methods) width = std::max(width, m.size());
    auto cell = [](double v) {
        if (!std::isfinite(v)) return std::string("NA");
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(4);
        s << v;
        return s.str();
    };
    std::ostringstream out;
    out << n_runs << " runs, learners:";
    for (const auto& l : learners) out << ' ' << l;
    out << "\n\n";
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    out << pad("method", width) << "  " << pad("rmse", 10) << pad("wrmse", 10) << pad("mae", 10)
        << pad("pearson", 10) << "mean_rank\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
        out << pad(methods[m], width) << "  ";
        for (auto field : kMetricFields) out << pad(cell(mean_metric(m, field)), 10);
        out << cell(mean_rank(m)) << '\n';
    }
    return out.str();
}

} // namespace goliath
