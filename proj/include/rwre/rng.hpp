#pragma once

#include <array>
#include <cstdint>

namespace rwre {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11 constants).
///
/// Each (seed, stream) pair indexes an independent sequence; replicas get
/// their own stream and can run in parallel with bit-reproducible output.
class Philox {
  public:
    Philox() : Philox(0, 0) {}

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)},
          idx_(4) {}

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            block_ = round10(ctr_, key_);
            // 64-bit block counter lives in words 0..1
            if (++ctr_[0] == 0) ++ctr_[1];
            idx_ = 0;
        }
        return block_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Fair spin: +1 or -1.
    int spin() { return (next_u32() & 1u) ? -1 : 1; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // modulo bias is < 2^-44 for the n used here (n << 2^20)
        return next_u64() % n;
    }

  private:
    using u32 = std::uint32_t;
    using vec4 = std::array<u32, 4>;
    using vec2 = std::array<u32, 2>;

    static constexpr u32 kMul0 = 0xD2511F53u;
    static constexpr u32 kMul1 = 0xCD9E8D57u;
    static constexpr u32 kWeyl0 = 0x9E3779B9u;
    static constexpr u32 kWeyl1 = 0xBB67AE85u;

    static vec4 round10(vec4 ctr, vec2 key) {
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<u32>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<u32>(p1),
                   static_cast<u32>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<u32>(p0)};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    vec2 key_;
    vec4 ctr_;
    vec4 block_{};
    int idx_;
};

/// SplitMix64 step, used to decorrelate user-facing seeds before they
/// become Philox keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Stream for replica `r` of a run with master seed `seed`.
inline Philox replica_stream(std::uint64_t seed, std::uint64_t replica) {
    std::uint64_t s = seed;
    return Philox(splitmix64(s), replica);
}

} // namespace rwre
