#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace goliath {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `index` under `key`. Pure function of its arguments, so
/// work split across threads by index reproduces the serial result.
std::uint64_t stream_seed(std::uint64_t key, std::uint64_t index) noexcept;

/// Random stream with library-independent variate generation.
///
/// The engine is std::mt19937_64 (bit-exact by the standard); all variates
/// are produced here rather than through <random> distributions, whose
/// algorithms differ between standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent child stream; does not advance this stream.
    Rng split(std::uint64_t index) const { return Rng(stream_seed(seed_, index)); }

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Uniform integer in [0, n), unbiased.
    std::size_t uniform_index(std::size_t n);

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    /// Gamma(shape, scale), Marsaglia-Tsang.
    double gamma(double shape, double scale = 1.0);
    double beta(double a, double b);
    double exponential(double rate = 1.0);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace goliath
