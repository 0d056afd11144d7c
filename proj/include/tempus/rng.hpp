#pragma once

#include <cstdint>

namespace tempus {

/// SplitMix64, written out in full for reproducibility. State advances by
/// the golden-ratio increment 0x9E3779B97F4A7C15; each output is the state
/// passed through the xor-shift-multiply finalizer with constants
/// 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB and shifts 30/27/31.
///
/// Chosen for campaign reproducibility: the whole algorithm fits on this
/// page, has no hidden global state, and produces identical streams on any
/// platform with 64-bit integers. Splitting (seeding an independent child
/// stream from one output) is sound by design.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// An independent generator whose stream does not overlap this one's.
    SplitMix64 split() noexcept { return SplitMix64(next()); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, bound) by the multiply-shift reduction
    /// (bound-independent bias below 2^-64, deterministic, no rejection loop).
    std::uint64_t below(std::uint64_t bound) noexcept {
        const unsigned __int128 wide = static_cast<unsigned __int128>(next()) * bound;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// +1 or -1 with equal probability.
    double sign() noexcept { return (next() & 1ull) ? 1.0 : -1.0; }

private:
    std::uint64_t state_;
};

} // namespace tempus
