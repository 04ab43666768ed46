#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace psam {

// Version of the random-draw algorithm below. Bump whenever the generator,
// the seed derivation, or the draw order changes, so that archived traces
// remain attributable to the exact algorithm that produced them.
inline constexpr int kRngAlgorithmVersion = 1;

namespace detail {

// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace detail

inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return detail::mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// Deterministic random source. mt19937_64 is bit-exact per the C++ standard;
// all distributions are generated here by explicit formulas (never through
// std::*_distribution, whose output is implementation-defined), so a (seed,
// stream) pair reproduces the identical draw sequence everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(derive_stream_seed(seed, stream)) {}

    // Uniform on (0, 1]; never returns 0 so log() stays finite.
    double uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Unit-mean exponential.
    double exponential() { return -std::log(uniform()); }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance,
    // via one Box-Muller pair per draw.
    std::complex<double> complex_normal(double variance) {
        const double r = std::sqrt(-variance * std::log(uniform()));
        const double phi = 2.0 * 3.14159265358979323846 * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace psam
