#pragma once

#include <cstdint>

namespace cebench {

/// SplitMix64. Chosen over std::mt19937 + distributions because the output
/// sequence is fully specified, so generated corpora are byte-identical
/// across compilers and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n). Modulo bias is irrelevant at n << 2^64.
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

    /// Uniform in [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Mixes two seeds into one (used to derive per-profile and per-cell streams).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    SplitMix64 g(a ^ (b * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL));
    return g.next();
}

} // namespace cebench
