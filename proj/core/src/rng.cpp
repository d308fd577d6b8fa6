#include "gemcap/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gemcap {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Stafford variant 13 of the MurmurHash3 finalizer.
std::uint64_t mix13(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace

Rng Rng::split(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix13(seed + kGolden * (index + 1)));
}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix13(state_);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    return next_u64() % n;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double Rng::normal(double mean, double stddev) {
    // u1 lands in (0, 1] so the log stays finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
}

std::uint64_t stable_hash(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

std::uint64_t stable_hash(const std::string& s) {
    return stable_hash(s.data(), s.size());
}

} // namespace gemcap
