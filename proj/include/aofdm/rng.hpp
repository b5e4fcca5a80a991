#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "aofdm/common.hpp"

namespace aofdm {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic stream seeding: mixes a master seed with a purpose tag and an
// index so independent streams (per element, per frame, ...) never collide.
inline uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (char c : tag) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001B3ull;
    }
    uint64_t s = master ^ h;
    uint64_t mixed = splitmix64(s);
    s ^= index * 0x9E3779B97F4A7C15ull + mixed;
    return splitmix64(s);
}

// Self-contained generator so sample streams are identical across compilers
// and standard-library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {
        // warm-up so nearby seeds decorrelate
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // avoid log(0)
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    // CN(0,1): unit-variance complex Gaussian
    cplx cgaussian() {
        const double s = std::sqrt(0.5);
        return {s * gaussian(), s * gaussian()};
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace aofdm
