#include "oracles.hpp"

#include "goliath/neighbors.hpp"
#include "goliath/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace goliath;

TEST_CASE("nearest neighbours on small examples") {
    const Matrix line{{0.0}, {1.0}, {10.0}};
    const auto t = knn(line, 1, Distance::Euclidean, false);
    CHECK(t.index(0, 0) == 1);
    CHECK(t.index(1, 0) == 0);
    CHECK(t.index(2, 0) == 1);

    const Matrix diag{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    const auto d = knn(diag, 2, Distance::Euclidean, false);
    CHECK(d.index(0, 0) == 1);
    CHECK(d.index(0, 1) == 2);
    CHECK(d.dist(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.dist(0, 1) == doctest::Approx(2.0 * std::sqrt(2.0)));
    // Row 1 is equidistant from 0 and 2: the smaller index comes first.
    CHECK(d.index(1, 0) == 0);
    CHECK(d.index(1, 1) == 2);
}

TEST_CASE("table matches a brute-force oracle") {
    Rng rng(50);
    Matrix x(50, 3);
    for (std::size_t i = 0; i < 50; ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = 10.0 * rng.uniform();
        x(i, 2) = rng.gamma(2.0);
    }
    const auto t = knn(x, 5);
    const auto oracle = test::brute_force_neighbors(x, 5);
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t l = 0; l < 5; ++l) CHECK(t.index(i, l) == oracle[i][l]);
        for (std::size_t l = 1; l < 5; ++l) CHECK(t.dist(i, l - 1) <= t.dist(i, l));
    }

    const auto all = knn(x, 49);
    for (std::size_t i = 0; i < 50; ++i) {
        std::vector<bool> seen(50, false);
        for (std::size_t l = 0; l < 49; ++l) {
            CHECK(all.index(i, l) != i);
            seen[all.index(i, l)] = true;
        }
        CHECK(std::count(seen.begin(), seen.end(), true) == 49);
    }

    Matrix scaled = x;
    for (std::size_t i = 0; i < 50; ++i) scaled(i, 1) *= 10.0;
    CHECK(knn(scaled, 5).indices == t.indices);
}

TEST_CASE("distance metrics") {
    const std::vector<double> a = {1.0, -2.0, 0.0};
    const std::vector<double> b = {4.0, 2.0, 0.0};
    CHECK(distance(Distance::Euclidean, a, b) == doctest::Approx(5.0));
    CHECK(distance(Distance::Manhattan, a, b) == doctest::Approx(7.0));
    CHECK(distance(Distance::Chebyshev, a, b) == doctest::Approx(4.0));
    // 0/0 terms are skipped.
    CHECK(distance(Distance::Canberra, a, b) == doctest::Approx(3.0 / 5.0 + 4.0 / 4.0));
    CHECK(parse_distance("manhattan") == Distance::Manhattan);
    CHECK_THROWS(parse_distance("cosine"));
}

TEST_CASE("invalid neighbour requests") {
    CHECK_THROWS(knn(Matrix{{1.0}}, 1));
    CHECK_THROWS(knn(Matrix{{1.0}, {2.0}, {3.0}}, 3));
    const auto z = standardize_columns(Matrix{{1.0, 5.0}, {3.0, 5.0}});
    CHECK(z(0, 1) == 0.0);
    CHECK(z(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
}
