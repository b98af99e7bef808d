#include "oracles.hpp"

#include "goliath/bandwidth.hpp"
#include "goliath/diagnostics.hpp"
#include "goliath/random.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace goliath;

namespace {

// Standard normal quantiles rescaled to sample sd exactly 1; their IQR/1.34
// exceeds 1, so the sd is the scale the rule uses.
// Evenly spaced sample rescaled to sd 1. Its IQR/1.34 exceeds the sd, so the
// robust scale min(sd, IQR/1.34) is exactly the sd.
std::vector<double> unit_sd_sample(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
    double m = 0, ss = 0;
    for (double v : x) m += v;
    m /= n;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / (n - 1));
    for (auto& v : x) v = (v - m) / sd;
    return x;
}

// Beta-kernel LSCV from the pairwise closed form of the integrated square.
double beta_lscv_oracle(const std::vector<double>& x, double h) {
    const std::size_t n = x.size();
    const double s = 1.0 / h + 2.0;
    std::vector<double> a(n), b(n), lb(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = x[i] / h + 1.0;
        b[i] = (1.0 - x[i]) / h + 1.0;
        lb[i] = std::lgamma(a[i]) + std::lgamma(b[i]) - std::lgamma(s);
    }
    const double lg2 = std::lgamma(2.0 * s - 2.0);
    double sq = 0.0;
    double loo = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lu = std::log(x[i]);
        const double l1u = std::log1p(-x[i]);
        sq += std::exp(std::lgamma(2 * a[i] - 1) + std::lgamma(2 * b[i] - 1) - lg2 - 2 * lb[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            sq += 2.0 * std::exp(std::lgamma(a[i] + a[j] - 1) + std::lgamma(b[i] + b[j] - 1) - lg2 - lb[i] - lb[j]);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) loo += std::exp((a[j] - 1) * lu + (b[j] - 1) * l1u - lb[j]);
        }
    }
    const double dn = static_cast<double>(n);
    return sq / (dn * dn) - 2.0 / dn * loo / (dn - 1.0);
}

double lscv_by_quadrature(const KernelKind& kind, const std::vector<double>& x, double h) {
    const FittedKernel k(kind, h);
    const double n = static_cast<double>(x.size());
    auto fhat = [&](double u) {
        double s = 0.0;
        for (double xi : x) s += kernel_density(k, u, xi);
        return s / n;
    };
    const double lo = std::isfinite(kind.lower) ? kind.lower : -std::numeric_limits<double>::infinity();
    const double hi = std::isfinite(kind.upper) ? kind.upper : std::numeric_limits<double>::infinity();
    const double sq = test::integrate([&](double u) { return fhat(u) * fhat(u); }, lo, hi, 1e-13);
    double loo = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (i != j) loo += kernel_density(k, x[i], x[j]);
        }
    }
    return sq - 2.0 / n * loo / (n - 1.0);
}

} // namespace

TEST_CASE("Silverman rule at n = 100 and unit scale") {
    const auto x = unit_sd_sample(100);
    CHECK(std::abs(estimate_bandwidth(KernelKind::gaussian(), x) - 0.4220) < 1e-3);
    CHECK(estimate_bandwidth(KernelKind::gaussian(), x) ==
          doctest::Approx(1.06 * std::pow(100.0, -0.2)).epsilon(1e-12));
}

TEST_CASE("Dirac and degenerate samples") {
    const std::vector<double> x = {1.0, 2.0, 5.0};
    CHECK(estimate_bandwidth(KernelKind::dirac(), x) == 0.0);
    WarningCapture w;
    const std::vector<double> c = {3.0, 3.0, 3.0, 3.0};
    CHECK(estimate_bandwidth(KernelKind::gaussian(), c) == doctest::Approx(4e-6));
    CHECK(!w.messages().empty());
    CHECK_THROWS(estimate_bandwidth(KernelKind::gaussian(), std::vector<double>{1.0}));
    CHECK_THROWS(estimate_bandwidth(KernelKind::beta01(), std::vector<double>{0.2, 1.4}));
}

TEST_CASE("closed-form LSCV agrees with quadrature") {
    Rng rng(4);
    std::vector<double> pos(25), neg(25), unit(25), box(25);
    for (std::size_t i = 0; i < 25; ++i) {
        pos[i] = 1.0 + rng.gamma(1.5);
        neg[i] = 2.0 - rng.gamma(2.0);
        unit[i] = rng.beta(2.0, 3.0);
        box[i] = 3.0 * rng.uniform();
    }
    const std::vector<std::pair<KernelKind, std::vector<double>>> cases = {
        {KernelKind::gamma(1.0), pos},
        {KernelKind::negative_gamma(2.0), neg},
        {KernelKind::beta01(), unit},
        {KernelKind::truncated_gaussian(0.0, 3.0), box},
        {KernelKind::gaussian(), box},
    };
    for (const auto& [kind, x] : cases) {
        CAPTURE(kind.name());
        for (double h : {0.03, 0.2, 0.7}) {
            CHECK(lscv_score(kind, x, h) == doctest::Approx(lscv_by_quadrature(kind, x, h)).epsilon(1e-8));
        }
    }
    for (double h : {0.01, 0.1, 0.5}) {
        CHECK(lscv_score(KernelKind::beta01(), unit, h) == doctest::Approx(beta_lscv_oracle(unit, h)).epsilon(1e-9));
    }
}

TEST_CASE("Beta LSCV bandwidth matches an exhaustive grid search") {
    Rng rng(500);
    std::vector<double> x(500);
    for (auto& v : x) v = rng.beta(2.0, 5.0);
    const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    const double range = *mx - *mn;
    constexpr int grid = 2000;
    const double lo = std::log(1e-4 * range);
    const double step = (std::log(range) - lo) / (grid - 1);
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (int g = 0; g < grid; ++g) {
        const double v = beta_lscv_oracle(x, std::exp(lo + g * step));
        if (v < best) {
            best = v;
            arg = g;
        }
    }
    const double h = estimate_bandwidth(KernelKind::beta01(), x);
    CHECK(std::abs(std::log(h) - (lo + arg * step)) <= 2.0 * step);
}

TEST_CASE("Binomial bandwidth maximises the leave-one-out likelihood on the k/51 grid") {
    Rng rng(9);
    std::vector<double> x(80);
    for (auto& v : x) v = std::floor(rng.gamma(3.0, 1.2));
    double best = -std::numeric_limits<double>::infinity();
    double best_h = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double h = k / 51.0;
        double ll = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                if (j == i || x[i] > x[j] + 1.0) continue;
                s += boost::math::pdf(boost::math::binomial(x[j] + 1.0, (x[j] + h) / (x[j] + 1.0)), x[i]);
            }
            if (s > 0.0) ll += std::log(s / (x.size() - 1.0));
        }
        if (ll > best) {
            best = ll;
            best_h = h;
        }
    }
    CHECK(estimate_bandwidth(KernelKind::binomial(), x) == doctest::Approx(best_h).epsilon(1e-14));
}

TEST_CASE("large samples are thinned and rescaled") {
    Rng rng(6);
    std::vector<double> x(4000);
    for (auto& v : x) v = rng.gamma(2.0);
    const double h = estimate_bandwidth(KernelKind::gamma(0.0), x);
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> thin(kLscvMaxSample);
    for (std::size_t i = 0; i < thin.size(); ++i) thin[i] = sorted[static_cast<std::size_t>((i + 0.5) * 4.0)];
    CHECK(h == doctest::Approx(estimate_bandwidth(KernelKind::gamma(0.0), thin) * std::pow(0.25, 0.4)).epsilon(1e-12));
    const FittedKernel k = fit_kernel(KernelKind::gamma(0.0), x, 0.5);
    CHECK(k.h == doctest::Approx(0.5 * h));
}
