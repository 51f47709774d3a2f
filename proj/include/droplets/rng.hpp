#pragma once

#include <cstdint>
#include <cmath>

namespace droplets {

// Splittable counter-seeded generator: (seed, stream) -> independent
// xoshiro256++ states via splitmix64. Identical (seed, stream) gives an
// identical sequence on every platform; no std::*_distribution is used
// anywhere so trajectories are bit-reproducible.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream = 0) {
        uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& w : s_) w = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1) with 53 random bits
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in {0, ..., n-1}
    uint64_t uniform_below(uint64_t n) {
        // Lemire multiply-shift with rejection of the biased zone
        uint64_t x = next_u64();
        __uint128_t m = (__uint128_t)x * n;
        uint64_t lo = (uint64_t)m;
        if (lo < n) {
            uint64_t thresh = (-n) % n;
            while (lo < thresh) {
                x = next_u64();
                m = (__uint128_t)x * n;
                lo = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    uint64_t s_[4];
};

} // namespace droplets
