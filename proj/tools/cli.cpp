#include "cli.hpp"

#include "goliath/bench.hpp"
#include "goliath/diagnostics.hpp"
#include "goliath/pipeline.hpp"
#include "goliath/stats.hpp"
#include "goliath/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace goliath::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kGenerateKeys = {
    "family", "k", "alpha", "beta", "noise-mult", "sigma-extend", "mode", "method-y", "sigma", "pert",
    "cluster", "max-components", "cluster-on-target", "N", "seed", "weights", "weights-file", "trim",
    "distance", "nn-weighting", "standardize", "target", "schema"};

// Keys handed to the shared method-option parser.
const std::set<std::string> kMethodKeys = {
    "family", "k", "alpha", "beta", "noise-mult", "sigma-extend", "mode", "method-y", "sigma", "pert",
    "cluster", "max-components", "cluster-on-target", "trim", "distance", "nn-weighting", "standardize"};

const std::set<std::string> kBenchmarkKeys = {"test_prop", "imb_prop", "n_runs", "seed", "learners",
                                              "methods", "inverse_squared_train", "trim"};

std::uint64_t parse_seed(const std::string& text) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("seed must be a non-negative integer, got '" + text + "'");
    }
    return v;
}

std::size_t parse_size(const std::string& key, const std::string& text) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument(key + " must be a non-negative integer, got '" + text + "'");
    }
    return v;
}

double parse_number(const std::string& key, const std::string& text) {
    const auto v = parse_double(text);
    if (!v) throw std::invalid_argument(key + " must be a number, got '" + text + "'");
    return *v;
}

std::string absolute_path(const fs::path& p) { return fs::absolute(p).lexically_normal().string(); }

std::optional<std::vector<ColumnSchema>> resolve_schema(const fs::path& input,
                                                        const std::map<std::string, std::string>& s) {
    if (const auto it = s.find("schema"); it != s.end()) return read_schema_file(it->second);
    const auto sidecar = schema_sidecar_path(input);
    if (fs::exists(sidecar)) return read_schema_file(sidecar);
    return std::nullopt;
}

// Marks `target` (or nothing for "none"); defaults to the schema's target,
// else the last column.
Dataset retarget(const Dataset& ds, const std::optional<std::string>& target) {
    auto schema = ds.schema();
    std::string name;
    if (target) {
        name = *target;
    } else if (const auto t = ds.target_column()) {
        return ds;
    } else {
        name = schema.back().name;
    }
    bool found = name == "none";
    for (auto& cs : schema) {
        cs.is_target = cs.name == name;
        found = found || cs.is_target;
    }
    if (!found) throw std::invalid_argument("target column '" + name + "' not found");
    return Dataset(std::move(schema), ds.values());
}

Dataset load_input(const fs::path& input, const std::map<std::string, std::string>& s, std::size_t* dropped) {
    auto loaded = load_csv(input, resolve_schema(input, s));
    if (dropped) *dropped = loaded.dropped_rows;
    std::optional<std::string> target;
    if (const auto it = s.find("target"); it != s.end()) target = it->second;
    return retarget(loaded.dataset, target);
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

void check_compatibility(const std::map<std::string, std::string>& s, const PipelineConfig& pc) {
    const Family f = pc.generator.family;
    const std::string fam = to_string(f);
    auto given = [&](const char* k) { return s.count(k) > 0; };
    for (const char* k : {"k", "distance", "standardize"}) {
        require(!given(k) || is_interpolation(f), "--" + std::string(k) + " does not apply to family " + fam);
    }
    for (const char* k : {"alpha", "beta", "nn-weighting"}) {
        require(!given(k) || f == Family::NNSB || f == Family::ENNSB,
                "--" + std::string(k) + " applies only to NNSB and eNNSB, not " + fam);
    }
    require(!given("sigma-extend") || f == Family::ENNSB, "--sigma-extend applies only to eNNSB, not " + fam);
    require(!given("noise-mult") || !(f == Family::OS || f == Family::SMOTE || f == Family::NNSB),
            "--noise-mult does not apply to family " + fam);
    for (const char* k : {"max-components", "cluster-on-target"}) {
        require(!given(k) || pc.generator.clustering, "--" + std::string(k) + " requires --cluster");
    }
    const bool file_weights = pc.weights == WeightMode::User;
    require(file_weights == given("weights-file"), "--weights file and --weights-file go together");
    const int m = pc.target.method;
    require(!given("sigma") || m == 1 || m == 3, "--sigma applies only to method-y 1 and 3");
    require(!given("pert") || m == 4, "--pert applies only to method-y 4");
}

std::vector<double> read_weight_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weights file '" + path.string() + "'");
    std::vector<double> w;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto v = parse_double(t);
        if (!v) throw std::invalid_argument("invalid weight '" + t + "' in '" + path.string() + "'");
        w.push_back(*v);
    }
    return w;
}

std::string format_stat(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

int cmd_inspect(const fs::path& input, const std::map<std::string, std::string>& s, std::ostream& out) {
    std::size_t dropped = 0;
    auto loaded = load_csv(input, resolve_schema(input, s));
    dropped = loaded.dropped_rows;
    Dataset ds = loaded.dataset;
    if (const auto it = s.find("target"); it != s.end()) ds = retarget(ds, it->second);
    out << ds.rows() << " observations and " << ds.cols() << " numerical variables\n";
    if (dropped > 0) out << dropped << (dropped == 1 ? " row" : " rows") << " dropped\n";
    std::size_t name_w = 6;
    for (const auto& cs : ds.schema()) name_w = std::max(name_w, cs.name.size() + (cs.is_target ? 9 : 0));
    std::vector<std::string> head = {"min", "q1", "median", "mean", "q3", "max"};
    out << std::left << std::setw(static_cast<int>(name_w) + 2) << "column";
    for (const auto& h : head) out << std::setw(12) << h;
    out << "kind\n";
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        const auto& cs = ds.schema()[j];
        auto col = ds.values().column(j);
        std::sort(col.begin(), col.end());
        const double stats_row[] = {col.front(), stats::quantile_sorted(col, 0.25), stats::quantile_sorted(col, 0.5),
                                    stats::mean(col), stats::quantile_sorted(col, 0.75), col.back()};
        out << std::setw(static_cast<int>(name_w) + 2) << (cs.is_target ? cs.name + " (target)" : cs.name);
        for (double v : stats_row) out << std::setw(12) << format_stat(v);
        out << cs.kind.to_string() << '\n';
    }
    return 0;
}

} // namespace

Manifest run_generate(const GenerateRequest& req, std::ostream& out) {
    const auto& s = req.settings;
    for (const auto& [k, v] : s) {
        if (!kGenerateKeys.count(k)) throw std::invalid_argument("unknown setting '" + k + "'");
    }

    MethodSpec spec;
    spec.name = "generate";
    auto& pc = spec.pipeline;
    for (const auto& [k, v] : s) {
        if (kMethodKeys.count(k)) apply_method_option(spec, k, v);
    }
    if (const auto it = s.find("weights"); it != s.end()) pc.weights = parse_weight_mode(it->second);
    check_compatibility(s, pc);

    std::size_t dropped = 0;
    const Dataset ds = load_input(req.input, s, &dropped);
    const std::uint64_t seed = s.count("seed") ? parse_seed(s.at("seed")) : 1;
    pc.generator.n_synthetic = s.count("N") ? parse_size("N", s.at("N")) : ds.rows();

    std::optional<std::vector<double>> user_w;
    if (pc.weights == WeightMode::User) user_w = read_weight_file(s.at("weights-file"));
    pc.validate();

    Rng rng(seed);
    const SynthesisResult result = synthesize(ds, pc, rng, user_w);

    const fs::path schema_out = schema_sidecar_path(req.output);
    const fs::path manifest_out = fs::path(req.output.string() + ".manifest");
    if (req.output.has_parent_path()) fs::create_directories(req.output.parent_path());
    write_csv(result.data, req.output, result.is_synthetic);
    auto out_schema = result.data.schema();
    out_schema.push_back(ColumnSchema{kProvenanceColumn, VariableKind::count(), false});
    write_schema_file(out_schema, schema_out);

    // Reload under the written schema: every value must be in support and round-trip exactly.
    const auto reloaded = load_csv(req.output, out_schema);
    const Matrix& back = reloaded.dataset.values();
    bool same = reloaded.dropped_rows == 0 && back.rows() == result.data.rows();
    for (std::size_t i = 0; same && i < back.rows(); ++i) {
        for (std::size_t j = 0; j < result.data.cols(); ++j) same = same && back(i, j) == result.data.values()(i, j);
        same = same && back(i, result.data.cols()) == (result.is_synthetic[i] ? 1.0 : 0.0);
    }
    if (!same) throw std::runtime_error("output validation failed: reloaded values differ");

    const auto n_synth = static_cast<std::size_t>(std::count(result.is_synthetic.begin(), result.is_synthetic.end(), true));
    out << "generated " << result.data.rows() << " rows (" << n_synth << " synthetic) with "
        << to_string(pc.generator.family) << " in " << to_string(pc.generator.mode) << " mode\n";
    std::size_t total_violations = 0;
    for (std::size_t c = 0; c < result.support_violations.size(); ++c) {
        const std::size_t v = result.support_violations[c];
        total_violations += v;
        if (v > 0) {
            out << "column '" << ds.schema()[c].name << "': " << v << " values outside "
                << ds.schema()[c].kind.to_string() << "; relaxed to REAL\n";
        }
    }
    if (result.targets_projected > 0) {
        out << result.targets_projected << " synthetic target value(s) projected onto "
            << ds.schema()[*ds.target_column()].kind.to_string() << '\n';
    }
    out << "support violations: " << total_violations << '\n';

    Manifest m;
    m.set("tool", "goliath");
    m.set("version", kVersion);
    m.set("command", "generate");
    m.set("input", absolute_path(req.input));
    m.set("input.sha256", sha256_file(req.input));
    m.set("input.dropped_rows", std::to_string(dropped));
    m.set("output", absolute_path(req.output));
    m.set("output.sha256", sha256_file(req.output));
    m.set("output.schema", absolute_path(schema_out));
    m.set("output.schema.sha256", sha256_file(schema_out));
    for (const auto& [k, v] : s) m.set("setting." + k, v);
    for (const char* k : {"schema", "weights-file"}) {
        if (s.count(k)) m.set(std::string(k) + ".sha256", sha256_file(s.at(k)));
    }
    m.set("resolved.seed", std::to_string(seed));
    m.set("resolved.N", std::to_string(pc.generator.n_synthetic));
    m.set("resolved.target", ds.target_column() ? ds.schema()[*ds.target_column()].name : "none");
    m.set("resolved.weights", to_string(pc.resolved_weights()));
    m.write(manifest_out);
    out << "wrote " << req.output.string() << ", " << schema_out.string() << ", " << manifest_out.string() << '\n';
    return m;
}

namespace {

BenchmarkConfig parse_benchmark_config(const fs::path& path) {
    const auto kv = read_key_values(path);
    BenchmarkConfig cfg;
    cfg.methods.clear();
    std::vector<std::string> method_names{"Imb", "FTrain", "G-NCSB"};
    std::map<std::string, std::string> method_options;
    for (const auto& [k, v] : kv) {
        if (k.rfind("method.", 0) == 0) {
            method_options[k.substr(7)] = v;
            continue;
        }
        if (!kBenchmarkKeys.count(k)) throw std::invalid_argument("unknown benchmark setting '" + k + "'");
        if (k == "test_prop") cfg.test_prop = parse_number(k, v);
        else if (k == "imb_prop") cfg.imb_prop = parse_number(k, v);
        else if (k == "n_runs") cfg.n_runs = parse_size(k, v);
        else if (k == "seed") cfg.seed = parse_seed(v);
        else if (k == "trim") cfg.trim = parse_number(k, v);
        else if (k == "inverse_squared_train") cfg.inverse_squared_train = v == "true" || v == "1";
        else if (k == "learners") {
            cfg.learners.clear();
            for (const auto& l : split(v, ',')) cfg.learners.push_back(parse_learner(trim(l)));
        } else if (k == "methods") {
            method_names.clear();
            for (const auto& m : split(v, ',')) method_names.push_back(trim(m));
        }
    }
    const auto presets = preset_names();
    for (const auto& name : method_names) {
        if (name.empty()) throw std::invalid_argument("empty method name");
        const bool is_preset = std::find(presets.begin(), presets.end(), name) != presets.end();
        MethodSpec spec;
        if (is_preset) {
            spec = preset_method(name);
        } else {
            if (!method_options.count(name)) {
                throw std::invalid_argument("method '" + name + "' is neither a preset nor defined by method." + name);
            }
            spec.name = name;
        }
        if (const auto it = method_options.find(name); it != method_options.end()) {
            for (const auto& opt : split(it->second, ',')) {
                const auto eq = opt.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("method." + name + ": expected key=value");
                apply_method_option(spec, trim(opt.substr(0, eq)), trim(opt.substr(eq + 1)));
            }
            method_options.erase(it);
        }
        cfg.methods.push_back(std::move(spec));
    }
    if (!method_options.empty()) {
        throw std::invalid_argument("method." + method_options.begin()->first + " is not listed in methods");
    }
    cfg.validate();
    return cfg;
}

} // namespace

Manifest run_benchmark_command(const BenchmarkRequest& req, std::ostream& out) {
    for (const auto& [k, v] : req.settings) {
        if (k != "target" && k != "schema") throw std::invalid_argument("unknown setting '" + k + "'");
    }
    const BenchmarkConfig cfg = parse_benchmark_config(req.config);
    const Dataset ds = load_input(req.input, req.settings, nullptr);
    if (!ds.target_column()) throw std::invalid_argument("benchmark needs a target column");

    const BenchmarkReport report = run_benchmark(ds, cfg);
    fs::create_directories(req.outdir);
    const std::vector<std::string> files = {"metrics.csv", "ranks.csv", "rank_heatmap.csv", "summary.txt"};
    report.write_metrics_csv(req.outdir / files[0]);
    report.write_ranks_csv(req.outdir / files[1]);
    report.write_rank_heatmap_csv(req.outdir / files[2]);
    const std::string summary = report.summary();
    {
        std::ofstream f(req.outdir / files[3], std::ios::binary);
        if (!f) throw std::runtime_error("cannot write summary.txt");
        f << summary;
    }
    out << summary;

    Manifest m;
    m.set("tool", "goliath");
    m.set("version", kVersion);
    m.set("command", "benchmark");
    m.set("input", absolute_path(req.input));
    m.set("input.sha256", sha256_file(req.input));
    m.set("config", absolute_path(req.config));
    m.set("config.sha256", sha256_file(req.config));
    m.set("outdir", absolute_path(req.outdir));
    for (const auto& f : files) m.set("output." + f + ".sha256", sha256_file(req.outdir / f));
    for (const auto& [k, v] : req.settings) m.set("setting." + k, v);
    if (req.settings.count("schema")) m.set("schema.sha256", sha256_file(req.settings.at("schema")));
    m.set("resolved.seed", std::to_string(cfg.seed));
    m.write(req.outdir / "manifest.txt");
    return m;
}

bool replay(const fs::path& manifest_path, const fs::path& workdir, std::ostream& out) {
    const Manifest m = Manifest::read(manifest_path);
    const std::string& command = m.get("command");
    std::map<std::string, std::string> settings;
    for (const auto& [k, v] : m.entries()) {
        if (k.rfind("setting.", 0) == 0) settings[k.substr(8)] = v;
    }
    auto check_input = [&](const std::string& key, const fs::path& path) {
        if (sha256_file(path) != m.get(key)) {
            throw std::runtime_error(path.string() + " changed since the manifest was written");
        }
    };
    check_input("input.sha256", m.get("input"));
    for (const char* k : {"schema", "weights-file"}) {
        if (settings.count(k)) check_input(std::string(k) + ".sha256", settings.at(k));
    }
    fs::create_directories(workdir);

    bool ok = true;
    auto compare = [&](const std::string& what, const std::string& expected, const fs::path& path) {
        const bool same = sha256_file(path) == expected;
        out << (same ? "identical: " : "DIFFERS:   ") << what << '\n';
        ok = ok && same;
    };
    std::ostringstream sink;
    if (command == "generate") {
        GenerateRequest req{m.get("input"), workdir / fs::path(m.get("output")).filename(), settings};
        run_generate(req, sink);
        compare("output", m.get("output.sha256"), req.output);
        compare("output schema", m.get("output.schema.sha256"), schema_sidecar_path(req.output));
    } else if (command == "benchmark") {
        check_input("config.sha256", m.get("config"));
        BenchmarkRequest req{m.get("input"), m.get("config"), workdir, settings};
        run_benchmark_command(req, sink);
        for (const char* f : {"metrics.csv", "ranks.csv", "rank_heatmap.csv", "summary.txt"}) {
            compare(f, m.get(std::string("output.") + f + ".sha256"), workdir / f);
        }
    } else {
        throw std::runtime_error("manifest command '" + command + "' cannot be replayed");
    }
    return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel-based synthetic oversampling for imbalanced regression", "goliath"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string in_path;
    std::string out_path;
    std::string config_path;
    std::string outdir;
    std::string manifest_path;
    std::string workdir;
    std::map<std::string, std::string> flags;

    auto* inspect = app.add_subcommand("inspect", "Summarize a CSV dataset and its inferred supports");
    inspect->add_option("input", in_path, "CSV file")->required();
    inspect->add_option("--schema", flags["schema"], "Schema sidecar (default: <input>.schema if present)");
    inspect->add_option("--target", flags["target"], "Target column");

    auto* generate = app.add_subcommand("generate", "Generate a synthetic or augmented dataset");
    generate->add_option("input", in_path, "Input CSV")->required();
    generate->add_option("output", out_path, "Output CSV")->required();
    generate->add_option("--config", config_path, "key=value file with defaults for the flags below");
    const std::vector<std::pair<std::string, std::string>> gen_opts = {
        {"family", "OS, CSB, NCSB, ROSE, GN, SMOTE, NNSB or eNNSB (default NCSB)"},
        {"k", "Nearest neighbours for interpolation (default 5)"},
        {"alpha", "Beta interpolant alpha (default 1)"},
        {"beta", "Beta interpolant beta (default 1)"},
        {"noise-mult", "Bandwidth multiplier; sigma_noise for GN (default 1, GN 0.1)"},
        {"sigma-extend", "eNNSB Gaussian sd or 'auto' (default auto)"},
        {"mode", "synth, augment or mix (default mix)"},
        {"method-y", "Target method 0..5 (default 1)"},
        {"sigma", "sd of v in target methods 1 and 3 (default 0)"},
        {"pert", "Scale of target method 4 (default 0.1)"},
        {"max-components", "Largest GMM size tried (default 5)"},
        {"N", "Synthetic sample size (default: number of rows)"},
        {"seed", "Master seed (default 1)"},
        {"weights", "inverse, inverse2, uniform or file (default by mode)"},
        {"weights-file", "One weight per input row"},
        {"trim", "Weight trimming factor (default 20)"},
        {"distance", "euclidean, manhattan, chebyshev or canberra"},
        {"nn-weighting", "uniform, distance or inverse-distance"},
        {"target", "Target column, or 'none' (default: schema target, else last column)"},
        {"schema", "Schema sidecar (default: <input>.schema if present)"},
    };
    std::map<std::string, std::string> gen_values;
    std::map<std::string, CLI::Option*> gen_handles;
    for (const auto& [name, help] : gen_opts) {
        gen_handles[name] = generate->add_option("--" + name, gen_values[name], help);
    }
    bool cluster = false;
    bool cluster_on_target = false;
    bool no_standardize = false;
    auto* cluster_flag = generate->add_flag("--cluster", cluster, "Generate within GMM clusters");
    auto* cot_flag = generate->add_flag("--cluster-on-target", cluster_on_target, "Cluster on the target");
    auto* nostd_flag = generate->add_flag("--no-standardize", no_standardize, "Raw-unit distances for k-NN");

    auto* bench = app.add_subcommand("benchmark", "Run the evaluation protocol");
    bench->add_option("input", in_path, "Input CSV")->required();
    bench->add_option("config", config_path, "Benchmark config (key=value)")->required();
    bench->add_option("outdir", outdir, "Report directory")->required();
    bench->add_option("--schema", flags["schema"], "Schema sidecar (default: <input>.schema if present)");
    bench->add_option("--target", flags["target"], "Target column (default: schema target, else last column)");

    auto* replay_cmd = app.add_subcommand("replay", "Re-run a manifest and verify identical outputs");
    replay_cmd->add_option("manifest", manifest_path, "Manifest written by generate or benchmark")->required();
    replay_cmd->add_option("--workdir", workdir, "Where to write the re-run (default: a temporary directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    auto given_flags = [&] {
        std::map<std::string, std::string> s;
        for (const auto& [k, v] : flags) {
            if (!v.empty()) s[k] = v;
        }
        return s;
    };

    try {
        if (*inspect) return cmd_inspect(in_path, given_flags(), out);
        if (*generate) {
            std::map<std::string, std::string> settings;
            if (!config_path.empty()) settings = read_key_values(config_path);
            for (const auto& [name, opt] : gen_handles) {
                if (opt->count() > 0) settings[name] = gen_values[name];
            }
            if (cluster_flag->count() > 0) settings["cluster"] = cluster ? "true" : "false";
            if (cot_flag->count() > 0) settings["cluster-on-target"] = cluster_on_target ? "true" : "false";
            if (nostd_flag->count() > 0) settings["standardize"] = no_standardize ? "false" : "true";
            run_generate(GenerateRequest{in_path, out_path, settings}, out);
            return 0;
        }
        if (*bench) {
            run_benchmark_command(BenchmarkRequest{in_path, config_path, outdir, given_flags()}, out);
            return 0;
        }
        if (*replay_cmd) {
            fs::path dir = workdir;
            if (dir.empty()) dir = fs::temp_directory_path() / ("goliath-replay-" + sha256_file(manifest_path).substr(0, 16));
            const bool ok = replay(manifest_path, dir, out);
            out << (ok ? "replay reproduced all outputs\n" : "replay FAILED: outputs differ\n");
            return ok ? 0 : 1;
        }
    } catch (const SupportError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

} // namespace goliath::cli
