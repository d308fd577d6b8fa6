#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace gemcap {

/// Deterministic pseudo-random stream built on SplitMix64.
///
/// The generator is fixed for the whole project: state advances by the
/// 64-bit golden-ratio constant and each output is the Stafford mix13
/// finalizer of the new state. The same seed therefore produces the same
/// stream on every platform. Child streams come from `split`, which mixes
/// the parent seed with the child index through the same finalizer, so
/// parallel and serial dataset builds draw identical numbers.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    /// Child stream `index` of a parent seed. Reproducible and, for
    /// distinct indices, statistically independent.
    static Rng split(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double();

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// One normal draw via the cosine Box-Muller transform. Consumes
    /// exactly two uniforms per call; element order is the call order.
    double normal(double mean, double stddev);

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Stable 64-bit FNV-1a hash of a byte string; used to derive seeds from
/// semantic content (e.g. caption streams keyed by record fields).
std::uint64_t stable_hash(const void* data, std::size_t len);
std::uint64_t stable_hash(const std::string& s);

} // namespace gemcap
