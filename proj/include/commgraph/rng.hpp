#pragma once

// Counter-based, splittable random streams. A stream is a 64-bit key; output
// i of the stream is a fixed mixing function of (key, i), so any trial's
// stream can be reconstructed from (master_seed, trial_index) alone.

#include <algorithm>
#include <cstdint>
#include <limits>

namespace commgraph {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream key for trial `index` of a run seeded with `master_seed`.
constexpr std::uint64_t derive_stream_key(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix64(mix64(master_seed ^ 0x6a09e667f3bcc909ULL) + mix64(index + 0x9e3779b97f4a7c15ULL));
}

/**
 * SplitMix64 viewed as a counter-based generator: the n-th output is
 * mix64(key + (n + 1) * golden_gamma). Satisfies
 * std::uniform_random_bit_generator.
 */
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_{key} {}

    static constexpr CounterRng for_trial(std::uint64_t master_seed, std::uint64_t index) noexcept {
        return CounterRng(derive_stream_key(master_seed, index));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return mix64(key_ + counter_ * kGamma);
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// A child stream, independent of this one's future outputs.
    constexpr CounterRng split() noexcept { return CounterRng(mix64((*this)() ^ 0xd1b54a32d192ed03ULL)); }

    [[nodiscard]] constexpr std::uint64_t key() const noexcept { return key_; }
    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Hands out bits from an underlying generator, exactly `count` per request,
/// least significant first.
template <class Rng>
class BitStream {
public:
    explicit BitStream(Rng& rng) : rng_{rng} {}

    /// Next `count` bits (count <= 64) as the low bits of the result.
    std::uint64_t take(unsigned count) {
        std::uint64_t out = 0;
        unsigned filled = 0;
        while (filled < count) {
            if (available_ == 0) {
                buffer_ = rng_();
                available_ = 64;
            }
            const unsigned chunk = std::min(count - filled, available_);
            const std::uint64_t mask = chunk == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << chunk) - 1;
            out |= (buffer_ & mask) << filled;
            buffer_ = chunk == 64 ? 0 : buffer_ >> chunk;
            available_ -= chunk;
            filled += chunk;
        }
        return out;
    }

private:
    Rng& rng_;
    std::uint64_t buffer_ = 0;
    unsigned available_ = 0;
};

}  // namespace commgraph
