#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "haarint/log_complex.hpp"

namespace haarint {

// Counter-seeded xoshiro256++ (Blackman & Vigna, https://prng.di.unimi.it/)
// with splitmix64 state expansion. A (seed, stream_id) pair fully determines
// the sequence, so estimators can hand out disjoint reproducible streams to
// workers and merge deterministically. Gaussians use Box-Muller, which draws
// a fixed number of uniforms per variate pair; no rejection steps anywhere.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream_id) {
        uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 0x3C6EF372FE94F82AULL));
        bool any = false;
        for (auto& s : state_) {
            s = splitmix64(x);
            any = any || (s != 0);
        }
        if (!any) state_[0] = 0x8BADF00DDEADBEEFULL;
    }

    uint64_t next_u64() {
        uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal; generates a Box-Muller pair and caches the second.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    // Complex gaussian with independent standard normal parts.
    Complex complex_normal() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace haarint
