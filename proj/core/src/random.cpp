#include "goliath/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace goliath {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t key, std::uint64_t index) noexcept {
    return mix64(mix64(key) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const auto bound = static_cast<std::uint64_t>(n);
    // Rejection on the top of the range keeps the result unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = engine_();
    } while (draw >= limit);
    return static_cast<std::size_t>(draw % bound);
}

double Rng::normal() {
    // Box-Muller, one variate per call so stream consumption is fixed.
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw std::invalid_argument("Rng::gamma: shape and scale must be positive");
    }
    if (shape < 1.0) {
        // Boost: G(a) = G(a + 1) U^(1/a)
        const double g = gamma(shape + 1.0, 1.0);
        return scale * g * std::pow(uniform_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

namespace {

// log of a Gamma(shape, 1) variate; stays finite for tiny shapes where the
// variate itself underflows.
double log_gamma_variate(Rng& rng, double shape) {
    if (shape < 1.0) {
        return std::log(rng.gamma(shape + 1.0, 1.0)) + std::log(rng.uniform_open()) / shape;
    }
    return std::log(rng.gamma(shape, 1.0));
}

} // namespace

double Rng::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("Rng::beta: shapes must be positive");
    }
    if (a >= 1.0 && b >= 1.0) {
        const double x = gamma(a, 1.0);
        const double y = gamma(b, 1.0);
        return x / (x + y);
    }
    const double lx = log_gamma_variate(*this, a);
    const double ly = log_gamma_variate(*this, b);
    return 1.0 / (1.0 + std::exp(ly - lx));
}

double Rng::exponential(double rate) { return -std::log(uniform_open()) / rate; }

} // namespace goliath
