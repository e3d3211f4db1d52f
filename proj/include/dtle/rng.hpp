#pragma once

#include <cstdint>

namespace dtle {

// Counter-based 64-bit generator (splitmix64 finalizer). Every draw is a pure
// function of (seed, counter), so schedules indexed by round number are
// reproducible without carrying generator state.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rng_at(std::uint64_t seed, std::uint64_t counter) {
    return mix64(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

// Uniform double in [0, 1) from 53 random bits.
inline double rng_unit(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(rng_at(seed, counter) >> 11) * 0x1.0p-53;
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed ^ mix64(stream)), counter_(0) {}

    std::uint64_t next_u64() { return rng_at(seed_, counter_++); }

    // Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform integer in [0, n). Modulo bias is negligible for n << 2^64.
    std::uint64_t below(std::uint64_t n) { return n ? next_u64() % n : 0; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace dtle
