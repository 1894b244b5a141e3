#pragma once

#include <cstdint>
#include <random>

namespace dualdec {

/// Deterministic RNG wrapper. The raw mt19937_64 stream and the uniform
/// mapping below are fixed by the standard, so a seed reproduces the same
/// values on every platform (std::uniform_real_distribution is not
/// implementation-defined-free, hence the manual mapping).
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    /// Derive an independent deterministic substream.
    Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 1))); }

    std::uint64_t seed() const { return seed_; }

    /// splitmix64 finalizer; also used to decorrelate nearby integer seeds.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

   private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace dualdec
