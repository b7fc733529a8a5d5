#pragma once

#include "orientstat/geometry.hpp"

#include <cstdint>
#include <random>

namespace orientstat {

/// Deterministic RNG helpers. Gaussians come from Box-Muller over the raw
/// 64-bit stream, so streams do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double next_double() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound).
    int next_index(int bound) {
        return static_cast<int>(engine_() % std::uint64_t(bound));
    }

    double next_gaussian();

    Direction direction();
    UnitQuaternion rotation();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stream-splitting: stable per-task seeds derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

} // namespace orientstat
