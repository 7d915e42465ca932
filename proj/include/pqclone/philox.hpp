#pragma once

#include <array>
#include <cstdint>

namespace pqclone {

/// Philox4x32-10 counter-based generator. Stateless: a (seed, stream, index)
/// triple maps to the same output on every platform, so shot batches can be
/// sharded or reordered without changing the merged counts.
struct Philox4x32 {
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t prod0 = uint64_t(0xD2511F53u) * ctr[0];
            const uint64_t prod1 = uint64_t(0xCD9E8D57u) * ctr[2];
            const uint32_t hi0 = uint32_t(prod0 >> 32), lo0 = uint32_t(prod0);
            const uint32_t hi1 = uint32_t(prod1 >> 32), lo1 = uint32_t(prod1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

    /// Uniform double in [0,1) for draw `index` of stream `stream` under `seed`.
    static double uniform(uint64_t seed, uint32_t stream, uint64_t index) {
        const auto out = block({uint32_t(index), uint32_t(index >> 32), stream, 0u},
                               {uint32_t(seed), uint32_t(seed >> 32)});
        const uint64_t bits = (uint64_t(out[0]) << 32) | out[1];
        return double(bits >> 11) * 0x1.0p-53;
    }
};

} // namespace pqclone
