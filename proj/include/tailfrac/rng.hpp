#pragma once

#include <array>
#include <cstdint>

namespace tailfrac {

// One step of the splitmix64 sequence, advancing `state`.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ seeded through splitmix64. The sequence is bit-exact for a
/// given seed on every platform; uniform draws use the top 53 bits and never
/// hit either endpoint of (0, 1).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) noexcept : seed_(seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    // Independent stream for one replication of a seeded experiment.
    // Distinct stream tags decorrelate different uses of the same
    // (base_seed, rep) pair.
    static RandomStream for_replication(std::uint64_t base_seed, std::uint64_t rep,
                                        std::uint64_t stream_tag) noexcept {
        std::uint64_t sm = base_seed ^ rep;
        sm = splitmix64_next(sm) ^ stream_tag;
        return RandomStream(splitmix64_next(sm));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw in the open interval (0, 1).
    double uniform() noexcept {
        for (;;) {
            const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
            if (u != 0.0) return u;  // all top 53 bits zero: redraw
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
};

}  // namespace tailfrac
