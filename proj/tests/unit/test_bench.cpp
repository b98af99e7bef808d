#include "fixtures.hpp"
#include "oracles.hpp"

#include "goliath/bench.hpp"
#include "goliath/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace goliath;

namespace {

BenchmarkConfig small_config(std::vector<std::string> methods, std::size_t runs) {
    BenchmarkConfig cfg;
    cfg.n_runs = runs;
    for (const auto& m : methods) cfg.methods.push_back(preset_method(m));
    return cfg;
}

Dataset gamma_target(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, 1) = rng.gamma(2.0);
        m(i, 0) = m(i, 1) + rng.normal();
    }
    return Dataset({{"x", VariableKind::real_line(), false}, {"y", VariableKind::real_line(), true}}, m);
}

} // namespace

TEST_CASE("metric arithmetic") {
    const std::vector<double> pred = {1.0, 2.0};
    const std::vector<double> truth = {1.0, 4.0};
    const auto m = compute_metrics(pred, truth, std::vector<double>{1.0, 3.0});
    CHECK(m.rmse == doctest::Approx(std::sqrt(2.0)));
    CHECK(m.mae == doctest::Approx(1.0));
    CHECK(m.wrmse == doctest::Approx(std::sqrt(3.0)));
    const std::vector<double> t3 = {1.0, 5.0, 2.0};
    const auto perfect = compute_metrics(t3, t3, std::vector<double>{1.0, 1.0, 1.0});
    CHECK(perfect.rmse == 0.0);
    CHECK(perfect.pearson == doctest::Approx(1.0));
    // Row order of the test set does not matter.
    const std::vector<double> p3 = {1.5, 4.0, 2.5};
    const std::vector<double> p3r = {2.5, 4.0, 1.5};
    const std::vector<double> t3r = {2.0, 5.0, 1.0};
    const std::vector<double> w3 = {1.0, 2.0, 3.0};
    const std::vector<double> w3r = {3.0, 2.0, 1.0};
    const auto a = compute_metrics(p3, t3, w3);
    const auto b = compute_metrics(p3r, t3r, w3r);
    CHECK(a.rmse == doctest::Approx(b.rmse).epsilon(1e-15));
    CHECK(a.wrmse == doctest::Approx(b.wrmse).epsilon(1e-15));
    CHECK(a.pearson == doctest::Approx(b.pearson).epsilon(1e-15));
}

TEST_CASE("weighted sampling without replacement") {
    Rng rng(1);
    const std::vector<double> w = {1.0, 1.0, 8.0, 0.0, 2.0};
    for (int r = 0; r < 100; ++r) {
        const auto s = weighted_sample_without_replacement(w, 3, rng);
        CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 3);
        CHECK(std::find(s.begin(), s.end(), 3) == s.end());
    }
    // First pick of a size-1 sample is categorical with probabilities w / sum.
    int twos = 0;
    for (int r = 0; r < 100000; ++r) twos += weighted_sample_without_replacement(w, 1, rng)[0] == 2;
    CHECK(std::abs(twos / 100000.0 - 8.0 / 12.0) < 0.006);
    CHECK_THROWS(weighted_sample_without_replacement(w, 5, rng));
}

TEST_CASE("splits") {
    const Dataset ds = gamma_target(3000, 2);
    auto cfg = small_config({"Imb"}, 3);
    Rng rng(3);
    const auto splits = make_splits(ds, cfg, rng);
    REQUIRE(splits.size() == 3);
    const auto y = ds.target();
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    for (const auto& s : splits) {
        CHECK(s.test.size() == 600);
        CHECK(s.train_full.size() == 2400);
        CHECK(s.train_imbalanced.size() == 360);
        std::set<std::size_t> test(s.test.begin(), s.test.end());
        for (auto i : s.train_full) CHECK(test.count(i) == 0);
        std::set<std::size_t> full(s.train_full.begin(), s.train_full.end());
        for (auto i : s.train_imbalanced) CHECK(full.count(i) == 1);
        std::vector<double> ty;
        for (auto i : s.test) ty.push_back(y[i]);
        const double a = *lo, b = *hi;
        // Drawing without replacement cannot repeat the few tail rows, so the
        // test set only moves toward uniform: it must be flatter than the data.
        auto to_uniform = [&](double v) { return (v - a) / (b - a); };
        CHECK(test::ks_statistic(ty, to_uniform) < test::ks_statistic(std::vector<double>(y.begin(), y.end()), to_uniform));
        std::vector<double> iy, fy;
        for (auto i : s.train_imbalanced) iy.push_back(y[i]);
        for (auto i : s.train_full) fy.push_back(y[i]);
        CHECK(stats::stddev(iy) < stats::stddev(fy));
    }

    cfg.imb_prop = 1.0;
    Rng r2(3);
    for (const auto& s : make_splits(ds, cfg, r2)) {
        CHECK(std::set<std::size_t>(s.train_imbalanced.begin(), s.train_imbalanced.end()) ==
              std::set<std::size_t>(s.train_full.begin(), s.train_full.end()));
    }
    cfg.imb_prop = 0.001;
    CHECK_THROWS(make_splits(ds, cfg, r2));
}

TEST_CASE("report shape and ranks") {
    const Dataset ds = gamma_target(400, 4);
    auto cfg = small_config({"Imb", "G-OS", "FTrain"}, 4);
    cfg.learners = {LearnerKind::Ridge, LearnerKind::Knn};
    const auto rep = run_benchmark(ds, cfg);
    CHECK(rep.records.size() == 4 * 3 * 2);
    REQUIRE(rep.ranks.size() == 4);
    for (const auto& r : rep.ranks) {
        std::vector<double> sorted = r;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::accumulate(sorted.begin(), sorted.end(), 0.0) == 6.0);
    }
    for (std::size_t run = 0; run < 4; ++run) {
        for (std::size_t m = 0; m < 3; ++m) {
            const auto& agg = rep.aggregated[run][m];
            double mean = 0.0;
            for (std::size_t l = 0; l < 2; ++l) mean += rep.records[(run * 3 + m) * 2 + l].metrics.rmse / 2.0;
            CHECK(agg.metrics.rmse == doctest::Approx(mean).epsilon(1e-14));
        }
    }

    test::TempDir dir("bench");
    rep.write_metrics_csv(dir / "m.csv");
    rep.write_ranks_csv(dir / "r.csv");
    rep.write_rank_heatmap_csv(dir / "h.csv");
    const std::string m = test::read_file(dir / "m.csv");
    CHECK(std::count(m.begin(), m.end(), '\n') == 1 + 4 * 3 * 2 * 4);
    CHECK(m.rfind("run,method,learner,metric,value\n", 0) == 0);
    const auto again = run_benchmark(ds, cfg);
    again.write_metrics_csv(dir / "m2.csv");
    CHECK(test::read_file(dir / "m2.csv") == m);
    CHECK(rep.summary().find("G-OS") != std::string::npos);
}

TEST_CASE("method presets and options") {
    CHECK(preset_method("G-NCSB").pipeline.generator.family == Family::NCSB);
    CHECK(preset_method("G-GNwCl").pipeline.generator.clustering);
    CHECK(preset_method("G-NNSBw").pipeline.generator.nn_weighting == NeighborWeighting::DistanceProportional);
    CHECK(preset_method("FTrain").kind == MethodKind::FullTrain);
    CHECK_THROWS(preset_method("G-UNKNOWN"));
    auto spec = preset_method("G-SMOTE");
    apply_method_option(spec, "k", "7");
    apply_method_option(spec, "noise-mult", "0.5");
    CHECK(spec.pipeline.generator.k == 7);
    CHECK(spec.pipeline.generator.noise_mult == 0.5);
    CHECK_THROWS(apply_method_option(spec, "k", "seven"));
    CHECK_THROWS(apply_method_option(spec, "colour", "red"));
    auto imb = preset_method("Imb");
    CHECK_THROWS(apply_method_option(imb, "k", "3"));
    BenchmarkConfig bad;
    CHECK_THROWS(bad.validate());
}
