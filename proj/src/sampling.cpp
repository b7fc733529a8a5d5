#include "orientstat/sampling.hpp"

#include <cmath>
#include <numbers>

namespace orientstat {

double Rng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0)
        u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Direction Rng::direction() {
    while (true) {
        const Direction v(next_gaussian(), next_gaussian(), next_gaussian());
        const double n = v.norm();
        if (n > 1e-12)
            return v / n;
    }
}

UnitQuaternion Rng::rotation() {
    while (true) {
        const double w = next_gaussian(), x = next_gaussian();
        const double y = next_gaussian(), z = next_gaussian();
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (n > 1e-12)
            return UnitQuaternion::unchecked(w / n, x / n, y / n, z / n);
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    // splitmix64 over the mixed words.
    std::uint64_t x = master ^ (stream * 0x9E3779B97F4A7C15ULL) ^ (index + 0xBF58476D1CE4E5B9ULL);
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace orientstat
