#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace suhub {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is addressed by (seed, stream): the seed forms the cipher key and
/// the 64-bit stream id occupies the upper counter words. Any stream can be
/// recreated from scratch in O(1), so Monte Carlo sample i can always consume
/// stream base+i regardless of which worker thread processes it. That fixed
/// assignment is what makes parallel runs bit-reproducible.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, 0u,
               static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[static_cast<std::size_t>(pos_++)];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform on [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential(1) by inverse CDF; log1p(-u) is exact at u = 0.
    double next_exponential() { return -std::log1p(-next_double()); }

    /// Uniform on {0, ..., bound-1} (Lemire multiply-shift, unbiased).
    std::uint32_t next_below(std::uint32_t bound) {
        std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
        auto lo = static_cast<std::uint32_t>(m);
        if (lo < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (lo < threshold) {
                m = static_cast<std::uint64_t>(next_u32()) * bound;
                lo = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// One Philox4x32-10 block; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> philox4x32(
        std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    void refill() {
        buf_ = philox4x32(ctr_, key_);
        pos_ = 0;
        if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter within the stream
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
};

/// Handle naming a family of per-sample streams: sample i draws from
/// RngStream(seed, stream_base + i). Campaign stages use disjoint bases.
struct StreamSeed {
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;

    RngStream stream(std::uint64_t offset) const {
        return RngStream(seed, stream_base + offset);
    }
};

}  // namespace suhub
