#pragma once

#include <cstdint>
#include <random>

namespace tcpkit {

/// Deterministic RNG wrapper. std::mt19937_64 has a fully specified bit
/// stream, and the conversions below avoid the implementation-defined
/// std::uniform_*_distribution wrappers, so sequences are reproducible
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n ? gen_() % n : 0; }

    /// Derive an independent stream (for per-start generators).
    Rng spawn(std::uint64_t salt) {
        return Rng(gen_() ^ (salt * 0x9E3779B97F4A7C15ull));
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace tcpkit
