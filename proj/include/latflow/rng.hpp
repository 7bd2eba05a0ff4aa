#pragma once

#include <cmath>
#include <cstdint>

namespace latflow {

// Counter-style splittable generator: splitmix64 with the stream's start
// state derived by avalanche-mixing (seed, stream_id).  The output at step i
// is a pure function of (seed, stream_id, i), so replicas indexed by
// stream_id are reproducible and mutually independent by construction.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t state = 0;

    static std::uint64_t avalanche(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    RngStream() = default;
    RngStream(std::uint64_t seed_, std::uint64_t stream_id_) : seed(seed_), stream_id(stream_id_) {
        state = avalanche(seed_ + 0x9E3779B97F4A7C15ULL) ^
                avalanche(stream_id_ * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
    }

    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ULL;
        return avalanche(state);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // standard normal, Box-Muller (second value cached)
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace latflow
