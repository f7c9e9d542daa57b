#pragma once

#include <cmath>
#include <cstdint>

namespace kdm {

// Counter-seeded random streams. Every path gets its own generator derived
// from (seed, path_index), so draws are independent of scheduling and the
// same seed reproduces the same numbers bit-for-bit on any thread count.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    Xoshiro256pp() : Xoshiro256pp(0) {}
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

// Gaussian stream for one simulation path. Box-Muller with a cached spare;
// the draw sequence is a pure function of (seed, path_index).
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : gen_(mix(seed, path_index)) {}

    // uniform in (0,1]
    double uniform_pos() { return (static_cast<double>(gen_.next() >> 11) + 1.0) * 0x1.0p-53; }
    // uniform in [0,1)
    double uniform01() { return static_cast<double>(gen_.next() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double theta = 6.283185307179586476925286766559 * uniform01();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t path_index) {
        std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (path_index + 1));
        return splitmix64(sm);
    }

    Xoshiro256pp gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace kdm
