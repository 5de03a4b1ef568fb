#pragma once

#include <cstdint>
#include <random>

namespace planlab::core {

// Deterministic RNG: mt19937_64 has a standard-specified sequence, and the
// bounded draws below avoid std::uniform_int_distribution, whose output is
// implementation-defined. Everything downstream that promises byte-identical
// reruns goes through this wrapper.
class rng {
public:
    explicit rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, bound), bound >= 1, via rejection sampling.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = gen_();
        while (v >= limit) v = gen_();
        return v % bound;
    }

    // Uniform integer in [lo, hi] inclusive.
    long long next_int(long long lo, long long hi) {
        return lo + static_cast<long long>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool next_bool() { return (gen_() & 1) != 0; }

private:
    std::mt19937_64 gen_;
};

// Stateless 64-bit mixer (splitmix64 finalizer); used to derive independent
// sub-seeds and for hash-based noise that must be pure per query.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return index == 0 ? seed : mix64(seed ^ mix64(index));
}

inline std::uint64_t hash_str(std::uint64_t seed, const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(h);
}

}  // namespace planlab::core
