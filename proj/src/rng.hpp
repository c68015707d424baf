#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace idprof {

/// Seeded random stream built on std::mt19937_64, whose output sequence is fixed
/// by the C++ standard. The distribution transforms below are written out here
/// rather than taken from <random> so that generated values do not depend on the
/// standard library vendor.
///
/// State advance: every call to `next_u64` advances the engine by one step.
/// `uniform` consumes one step, `normal` consumes two, `below(n)` consumes one
/// or more (rejection sampling).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (cosine branch only).
    double normal();

    /// Unbiased integer in [0, n). Requires n > 0.
    std::uint64_t below(std::uint64_t n);

    /// `m` distinct indices from [0, n), in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m);

private:
    std::mt19937_64 engine_;
};

}  // namespace idprof
