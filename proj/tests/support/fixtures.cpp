#include "fixtures.hpp"

#include "goliath/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <unistd.h>

namespace goliath::test {

namespace {

std::vector<ColumnSchema> real_schema(const std::vector<std::string>& names, const std::string& target) {
    std::vector<ColumnSchema> s;
    for (const auto& n : names) s.push_back({n, VariableKind::real_line(), n == target});
    return s;
}

} // namespace

Dataset abalone_like(std::uint64_t seed) {
    constexpr std::size_t n = 4177;
    constexpr long kRingSum = 41493;
    Rng rng(seed);
    std::vector<long> rings(n);
    for (auto& r : rings) r = std::clamp(1L + std::lround(rng.gamma(7.69, 1.161)), 1L, 29L);
    rings[0] = 1;
    rings[1] = 29;
    long sum = std::accumulate(rings.begin(), rings.end(), 0L);
    for (std::size_t i = 2; sum != kRingSum; i = i + 1 < n ? i + 1 : 2) {
        if (rings[i] < 5 || rings[i] > 20) continue;
        const long step = sum < kRingSum ? 1 : -1;
        rings[i] += step;
        sum += step;
    }

    Matrix m(n, 8);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = static_cast<double>(rings[i]);
        const double len = std::clamp(0.18 + 0.035 * r + 0.06 * rng.normal(), 0.075, 0.815);
        const double dia = std::clamp(0.8 * len + 0.015 * rng.normal(), 0.055, 0.65);
        const double hgt = std::clamp(0.34 * len + 0.012 * rng.normal(), 0.01, 0.5);
        const double whole = 2.6 * len * len * len * std::exp(0.12 * rng.normal()) + 0.002;
        const double shucked = whole * std::clamp(0.43 + 0.04 * rng.normal(), 0.2, 0.7);
        const double viscera = whole * std::clamp(0.22 + 0.02 * rng.normal(), 0.1, 0.35);
        const double shell = whole * std::clamp(0.29 + 0.03 * rng.normal(), 0.15, 0.45);
        const double row[] = {len, dia, hgt, whole, shucked, viscera, shell, r};
        std::copy(std::begin(row), std::end(row), m.row(i).begin());
    }
    std::vector<ColumnSchema> schema = {
        {"Length", VariableKind::unit_interval(), false},
        {"Diameter", VariableKind::unit_interval(), false},
        {"Height", VariableKind::unit_interval(), false},
        {"WholeWeight", VariableKind::positive_half_line(0.0), false},
        {"ShuckedWeight", VariableKind::positive_half_line(0.0), false},
        {"VisceraWeight", VariableKind::positive_half_line(0.0), false},
        {"ShellWeight", VariableKind::positive_half_line(0.0), false},
        {"Rings", VariableKind::count(), true},
    };
    return Dataset(std::move(schema), std::move(m));
}

Dataset no2_like(std::uint64_t seed) {
    constexpr std::size_t n = 500;
    Rng rng(seed);
    Matrix m(n, 8);
    for (std::size_t i = 0; i < n; ++i) {
        double lin = 3.0;
        for (std::size_t j = 0; j < 7; ++j) {
            m(i, j) = rng.normal(0.0, 1.0 + 0.5 * static_cast<double>(j));
            lin += 0.1 * m(i, j);
        }
        m(i, 7) = lin + 0.5 * rng.normal();
    }
    return Dataset(real_schema({"cars", "temp", "wind", "temp_diff", "wind_dir", "hour", "day", "y"}, "y"),
                   std::move(m));
}

Dataset skewed_regression(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(n, p + 1);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    names.push_back("y");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) m(i, j) = rng.uniform();
        const double x1 = m(i, 0);
        const double x2 = p > 1 ? m(i, 1) : 0.0;
        const double x3 = p > 2 ? m(i, 2) : 0.0;
        const double f = std::exp(2.5 * x1 + x2) + 2.0 * std::sin(3.0 * x3);
        m(i, p) = f + (0.2 + 0.15 * f) * rng.normal();
    }
    return Dataset(real_schema(names, "y"), std::move(m));
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
        path_ = base / ("goliath-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        if (std::filesystem::create_directories(path_)) break;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace goliath::test
