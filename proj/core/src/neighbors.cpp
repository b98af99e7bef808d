#include "goliath/neighbors.hpp"

#include "goliath/parallel.hpp"
#include "goliath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace goliath {

std::string to_string(Distance d) {
    switch (d) {
    case Distance::Euclidean: return "euclidean";
    case Distance::Manhattan: return "manhattan";
    case Distance::Chebyshev: return "chebyshev";
    case Distance::Canberra: return "canberra";
    }
    return "euclidean";
}

Distance parse_distance(const std::string& text) {
    if (text == "euclidean") return Distance::Euclidean;
    if (text == "manhattan") return Distance::Manhattan;
    if (text == "chebyshev") return Distance::Chebyshev;
    if (text == "canberra") return Distance::Canberra;
    throw std::invalid_argument("unknown distance '" + text + "'");
}

double distance(Distance d, std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = std::abs(a[j] - b[j]);
        switch (d) {
        case Distance::Euclidean: acc += diff * diff; break;
        case Distance::Manhattan: acc += diff; break;
        case Distance::Chebyshev: acc = std::max(acc, diff); break;
        case Distance::Canberra: {
            // 0/0 terms contribute nothing.
            const double denom = std::abs(a[j]) + std::abs(b[j]);
            if (denom > 0.0) acc += diff / denom;
            break;
        }
        }
    }
    return d == Distance::Euclidean ? std::sqrt(acc) : acc;
}

Matrix standardize_columns(const Matrix& x) {
    Matrix out = x;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.column(j);
        const double m = stats::mean(col);
        double sd = stats::stddev(col);
        if (!(sd > 0.0)) sd = 1.0;
        for (std::size_t i = 0; i < x.rows(); ++i) out(i, j) = (x(i, j) - m) / sd;
    }
    return out;
}

NeighborTable knn(const Matrix& x, std::size_t k, Distance metric, bool standardize) {
    const std::size_t n = x.rows();
    if (n < 2) throw std::invalid_argument("knn: need at least 2 rows");
    if (k == 0 || k >= n) throw std::invalid_argument("knn: k must satisfy 0 < k < n");
    const Matrix z = standardize ? standardize_columns(x) : x;

    NeighborTable table;
    table.k = k;
    table.indices.resize(n * k);
    table.distances.resize(n * k);
    parallel_for(n, [&](std::size_t i) {
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) cand.emplace_back(distance(metric, z.row(i), z.row(j)), j);
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        for (std::size_t l = 0; l < k; ++l) {
            table.distances[i * k + l] = cand[l].first;
            table.indices[i * k + l] = cand[l].second;
        }
    });
    return table;
}

} // namespace goliath
