// Self-contained PCG32 generator. std::shuffle / std::uniform_*_distribution
// are implementation-defined, so every seeded draw in the project goes
// through this header to keep outputs identical across platforms.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace bchange::rng {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a, used to derive per-scope seeds from a base seed and a tag.
constexpr std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t s = base ^ hash_tag(tag);
    return splitmix64(s);
}

class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 0xda3e39cb94b95bdbULL) {
        std::uint64_t sm = seed;
        inc_ = (splitmix64(sm) << 1u) | 1u;
        (void)stream;
        state_ = 0;
        next();
        state_ += splitmix64(sm);
        next();
    }

    std::uint32_t next() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    // Unbiased bounded draw (rejection sampling), bound > 0.
    std::uint32_t bounded(std::uint32_t bound) {
        std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
        for (;;) {
            std::uint32_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Inclusive integer range.
    std::int64_t int_in(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(bounded(static_cast<std::uint32_t>(hi - lo + 1)));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        std::uint64_t hi = next();
        std::uint64_t lo = next();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    bool chance(double p) { return next_double() < p; }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = bounded(static_cast<std::uint32_t>(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Sample k distinct indices from [0, n) in selection order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        shuffle(pool);
        if (k < n) pool.resize(k);
        return pool;
    }

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 1;
};

}  // namespace bchange::rng
