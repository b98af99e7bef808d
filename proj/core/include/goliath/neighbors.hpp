#pragma once

#include "goliath/matrix.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace goliath {

enum class Distance { Euclidean, Manhattan, Chebyshev, Canberra };

std::string to_string(Distance d);
Distance parse_distance(const std::string& text);

double distance(Distance d, std::span<const double> a, std::span<const double> b);

/// k nearest neighbours of every row, self excluded. Row i's entries are
/// sorted by distance, ties broken by the smaller index.
struct NeighborTable {
    std::size_t k = 0;
    std::vector<std::size_t> indices; // n x k, row-major
    std::vector<double> distances;    // n x k, row-major

    std::size_t rows() const noexcept { return k == 0 ? 0 : indices.size() / k; }
    std::size_t index(std::size_t i, std::size_t l) const { return indices[i * k + l]; }
    double dist(std::size_t i, std::size_t l) const { return distances[i * k + l]; }
};

/// Centres each column and divides by its sample sd (constant columns by 1).
Matrix standardize_columns(const Matrix& x);

/// Exact brute-force k-NN. Requires n >= 2 and k < n.
NeighborTable knn(const Matrix& x, std::size_t k, Distance metric = Distance::Euclidean,
                  bool standardize = true);

} // namespace goliath
