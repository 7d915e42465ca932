#include <doctest.h>

#include "pqclone/philox.hpp"

using pqclone::Philox4x32;

TEST_SUITE("philox") {

// reference vectors for the 10-round 4x32 configuration
TEST_CASE("known answers") {
    {
        const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
        CHECK(out[0] == 0x6627e8d5u);
        CHECK(out[1] == 0xe169c58du);
        CHECK(out[2] == 0xbc57ac4cu);
        CHECK(out[3] == 0x9b00dbd8u);
    }
    {
        const auto out = Philox4x32::block(
            {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
            {0xffffffffu, 0xffffffffu});
        CHECK(out[0] == 0x408f276du);
        CHECK(out[1] == 0x41c83b0eu);
        CHECK(out[2] == 0xa20bc7c6u);
        CHECK(out[3] == 0x6d5451fdu);
    }
    {
        const auto out = Philox4x32::block(
            {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
            {0xa4093822u, 0x299f31d0u});
        CHECK(out[0] == 0xd16cfe09u);
        CHECK(out[1] == 0x94fdccebu);
        CHECK(out[2] == 0x5001e420u);
        CHECK(out[3] == 0x24126ea1u);
    }
}

TEST_CASE("uniforms are deterministic and in range") {
    double sum = 0.0;
    for (uint64_t i = 0; i < 10000; ++i) {
        const double u = Philox4x32::uniform(42, 7, i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
    CHECK(Philox4x32::uniform(42, 7, 123) == Philox4x32::uniform(42, 7, 123));
    CHECK(Philox4x32::uniform(42, 7, 123) != Philox4x32::uniform(43, 7, 123));
    CHECK(Philox4x32::uniform(42, 7, 123) != Philox4x32::uniform(42, 8, 123));
}

} // TEST_SUITE
