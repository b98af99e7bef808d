#include "oracles.hpp"

#include "goliath/kernels.hpp"
#include "goliath/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace goliath;

namespace {

struct Case {
    FittedKernel k;
    double x;
};

std::vector<Case> continuous_cases() {
    return {
        {{KernelKind::gaussian(), 0.7}, -1.3},
        {{KernelKind::gamma(0.0), 0.3}, 0.0},
        {{KernelKind::gamma(-2.0), 0.05}, 1.0},
        {{KernelKind::negative_gamma(4.0), 0.5}, 2.5},
        {{KernelKind::beta01(), 0.1}, 0.5},
        {{KernelKind::beta01(), 0.02}, 0.97},
        {{KernelKind::truncated_gaussian(0.0, 2.0), 0.8}, 0.1},
    };
}

double lower_end(const Case& c) {
    switch (c.k.kind.family) {
    case KernelFamily::Gaussian: return c.x - 40.0 * c.k.h;
    case KernelFamily::NegativeGamma: return -std::numeric_limits<double>::infinity();
    default: return c.k.kind.lower;
    }
}

} // namespace

TEST_CASE("documented kernel values") {
    const FittedKernel bin(KernelKind::binomial(), 0.1);
    CHECK(kernel_density(bin, 3.0, 2.0) == doctest::Approx(std::pow(2.1 / 3.0, 3)).epsilon(1e-13));
    CHECK(kernel_density(bin, 4.0, 2.0) == 0.0);
    CHECK(kernel_density(bin, 1.5, 2.0) == 0.0);

    for (double h : {0.1, 0.5, 2.0}) {
        const FittedKernel g(KernelKind::gamma(0.0), h);
        for (double u : {0.0, 0.3, 2.0}) {
            CHECK(kernel_density(g, u, 0.0) == doctest::Approx(std::exp(-u / h) / h).epsilon(1e-12));
        }
    }

    // [0, 10h] stands in for the half line; the normaliser is computed by quadrature.
    const double h = 0.4;
    const FittedKernel tg(KernelKind::truncated_gaussian(0.0, 10.0 * h), h);
    const double phi0 = 1.0 / (h * std::sqrt(2.0 * std::numbers::pi));
    const double alpha = test::integrate([&](double u) { return std::exp(-0.5 * u * u / (h * h)) / (h * std::sqrt(2 * std::numbers::pi)); }, 0.0, 10.0 * h);
    CHECK(kernel_density(tg, 0.0, 0.0) == doctest::Approx(phi0 / alpha).epsilon(1e-10));
    CHECK(kernel_density(tg, 0.0, 0.0) == doctest::Approx(2.0 * phi0).epsilon(1e-10));

    Rng rng(1);
    const FittedKernel d(KernelKind::dirac(), 0.0);
    for (int i = 0; i < 100; ++i) CHECK(kernel_sample(d, 3.7, rng) == 3.7);
    CHECK(kernel_density(d, 3.7, 3.7) == 1.0);
}

TEST_CASE("kernels integrate to one") {
    for (const auto& c : continuous_cases()) {
        const double hi = c.k.kind.family == KernelFamily::Gaussian ? c.x + 40.0 * c.k.h
                          : std::isfinite(c.k.kind.upper) ? c.k.kind.upper
                                                          : std::numeric_limits<double>::infinity();
        const double total = test::integrate([&](double u) { return kernel_density(c.k, u, c.x); }, lower_end(c), hi);
        CAPTURE(c.k.kind.name());
        CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    }
    for (double x : {0.0, 1.0, 7.0, 60.0}) {
        for (double h : {0.01, 0.5, 0.99}) {
            const FittedKernel k(KernelKind::binomial(), h);
            double s = 0.0;
            for (double u = 0.0; u <= x + 1.0; u += 1.0) s += kernel_density(k, u, x);
            CHECK(std::abs(s - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("density matches the closed-form distribution function") {
    for (const auto& c : continuous_cases()) {
        CAPTURE(c.k.kind.name());
        for (double q : {0.1, 0.5, 0.9}) {
            // Probe points spread over the kernel's bulk.
            const double u = c.k.kind.family == KernelFamily::NegativeGamma ? c.k.kind.upper - q * 3.0
                             : c.k.kind.family == KernelFamily::Gaussian    ? c.x + (q - 0.5) * 4 * c.k.h
                             : c.k.kind.family == KernelFamily::Beta01      ? q
                             : c.k.kind.family == KernelFamily::TruncatedGaussian ? 2.0 * q
                                                                                  : c.k.kind.lower + q * 2.0;
            const double f = test::integrate([&](double v) { return kernel_density(c.k, v, c.x); }, lower_end(c), u);
            CHECK(f == doctest::Approx(test::kernel_cdf(c.k, c.x, u)).epsilon(1e-8));
        }
    }
}

TEST_CASE("samplers stay in support and follow the density") {
    constexpr int n = 100000;
    const double crit = 1.95 / std::sqrt(static_cast<double>(n));
    Rng rng(77);
    for (const auto& c : continuous_cases()) {
        CAPTURE(c.k.kind.name());
        std::vector<double> draws(n);
        for (auto& d : draws) {
            d = kernel_sample(c.k, c.x, rng);
            REQUIRE(c.k.kind.in_support(d));
        }
        CHECK(test::ks_statistic(draws, [&](double u) { return test::kernel_cdf(c.k, c.x, u); }) < crit);
    }
}

TEST_CASE("binomial and beta sampler moments") {
    Rng rng(8);
    const FittedKernel bin(KernelKind::binomial(), 0.1);
    int threes = 0;
    constexpr int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const double u = kernel_sample(bin, 2.0, rng);
        REQUIRE((u == 0.0 || u == 1.0 || u == 2.0 || u == 3.0));
        threes += u == 3.0;
    }
    CHECK(std::abs(threes / static_cast<double>(n) - 0.343) < 0.002);

    for (double h : {0.05, 1.0, 10.0}) {
        const FittedKernel b(KernelKind::beta01(), h);
        double s = 0.0;
        for (int i = 0; i < 100000; ++i) {
            const double u = kernel_sample(b, 0.5, rng);
            REQUIRE((u >= 0.0 && u <= 1.0));
            s += u;
        }
        CHECK(std::abs(s / 100000.0 - 0.5) < 0.005);
    }
}

TEST_CASE("kde_eval") {
    const std::vector<double> one = {0.0};
    CHECK(kde_eval(one, KernelKind::gaussian(), 1.0, 0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    const std::vector<double> two = {0.0, 2.0};
    CHECK(kde_eval(two, KernelKind::gaussian(), 1.0, 1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-14));
    const std::vector<double> unit = {0.2, 0.5, 0.9};
    CHECK(kde_eval(unit, KernelKind::beta01(), 0.1, 2.0) == 0.0);
    const double total = test::integrate([&](double u) { return kde_eval(unit, KernelKind::beta01(), 0.1, u); }, 0.0, 1.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("kernel validation") {
    CHECK_THROWS(FittedKernel(KernelKind::gaussian(), 0.0));
    CHECK_THROWS(FittedKernel(KernelKind::binomial(), 1.0));
    CHECK_NOTHROW(FittedKernel(KernelKind::dirac(), 0.0));
    const FittedKernel g(KernelKind::gamma(1.0), 0.2);
    CHECK_THROWS_AS(kernel_density(g, 2.0, 0.5), std::domain_error);
    CHECK(kernel_density(g, 0.5, 2.0) == 0.0);
    CHECK_THROWS_AS(kernel_density(FittedKernel(KernelKind::binomial(), 0.5), 1.0, 1.5), std::domain_error);
    CHECK(compatible(KernelKind::dirac(), VariableKind::count()));
    CHECK(compatible(KernelKind::beta01(), VariableKind::unit_interval()));
    CHECK_FALSE(compatible(KernelKind::gaussian(), VariableKind::unit_interval()));
    CHECK(kernel_for(VariableKind::negative_half_line(3.0)) == KernelKind::negative_gamma(3.0));
}
