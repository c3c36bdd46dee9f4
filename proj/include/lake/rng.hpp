#pragma once

#include <cstdint>

namespace lake {

// splitmix64; used to expand seeds into generator state.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with hand-rolled Box-Muller normals.  Everything is written
// out explicitly so that a given (seed, path index) produces the same
// stream regardless of compiler or standard library.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) noexcept {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
        for (auto& w : state_) w = splitmix64_next(sm);
    }

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

    // Uniform on (0, 1]; never returns 0 so it is safe under log().
    double uniform_pos() noexcept {
        return 1.0 - static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws two uniforms per pair.
    double normal() noexcept;

private:
    static std::uint64_t rotl(std::uint64_t v, int k) noexcept {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Stream for one Monte Carlo path: distinct paths get decorrelated
// generators from (seed, path index) alone, so serial and parallel runs
// agree path by path.
inline RngStream path_stream(std::uint64_t seed, std::uint64_t path_index) noexcept {
    return RngStream(seed, path_index + 1);
}

} // namespace lake
