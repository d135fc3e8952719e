#pragma once

#include <array>
#include <cstdint>

namespace qsat {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit seed is the key. The 128-bit counter is split into a 64-bit draw index
/// (low words) and a 64-bit stream id (high words), so every (seed, stream) pair is an
/// independent, platform-reproducible sequence. Streams used by the simulator:
///   0            ideal shot sampling
///   1 + t        noisy trajectory t
class Philox4x32 {
   public:
    using Block = std::array<std::uint32_t, 4>;

    Philox4x32(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    }

    static Block generate(Block counter, std::array<std::uint32_t, 2> key);

    /// Next 32 random bits.
    std::uint32_t next_u32();
    /// Next 64 random bits.
    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t index_ = 0;
    Block buffer_{};
    int used_ = 4;
};

}  // namespace qsat
