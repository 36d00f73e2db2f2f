#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "suhub/rng.hpp"

using suhub::RngStream;

TEST_CASE("philox4x32-10 known answers", "[rng]") {
    // Reference vectors of the published Philox4x32-10 function.
    auto out = RngStream::philox4x32({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = RngStream::philox4x32(
        {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
        {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = RngStream::philox4x32(
        {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
        {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct", "[rng]") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool same_ab = true, same_ac = true, same_ad = true;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        same_ab &= va == b.next_u64();
        same_ac &= va == c.next_u64();
        same_ad &= va == d.next_u64();
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
    CHECK_FALSE(same_ad);
}

TEST_CASE("uniform doubles stay in [0,1) with sane mean", "[rng]") {
    RngStream rng(1, 0);
    double sum = 0.0;
    constexpr int kN = 100000;
    for (int i = 0; i < kN; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // SE of the mean is 1/sqrt(12 N) ~ 9.1e-4.
    CHECK(std::abs(sum / kN - 0.5) < 4.0 * 9.13e-4);
}

TEST_CASE("exponential sampler has unit mean", "[rng]") {
    RngStream rng(2, 0);
    double sum = 0.0;
    constexpr int kN = 100000;
    for (int i = 0; i < kN; ++i) sum += rng.next_exponential();
    CHECK(std::abs(sum / kN - 1.0) < 4.0 / std::sqrt(static_cast<double>(kN)));
}

TEST_CASE("bounded draw covers the range uniformly", "[rng]") {
    RngStream rng(3, 0);
    int counts[5] = {0, 0, 0, 0, 0};
    constexpr int kN = 50000;
    for (int i = 0; i < kN; ++i) ++counts[rng.next_below(5)];
    for (int k = 0; k < 5; ++k) {
        CHECK(counts[k] > 0);
        // 5 sigma around kN/5 with sigma = sqrt(N p (1-p))
        CHECK(std::abs(counts[k] - kN / 5) < 5.0 * std::sqrt(kN * 0.2 * 0.8));
    }
}
