#pragma once

// Counter-free splittable RNG for the path simulator.  Each path owns an
// independent SplitMix64 stream keyed by (seed, path index), so ensembles are
// reproducible bit-for-bit regardless of how paths are scheduled across
// threads.  SplitMix64's output mixing is strong enough that distinct keys
// give effectively independent streams for Monte Carlo purposes.

#include <cmath>
#include <cstdint>

namespace lsmp {

class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform on (0,1): 53-bit mantissa offset by half an ulp so 0 and 1 are
    // unreachable (the Box-Muller log needs that).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller, caching the second member of the pair.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lsmp
