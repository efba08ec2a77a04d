#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace spde {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Stateless: output is a pure function of (counter, key).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Version of the noise-stream layout below. Bump when the mapping from
/// (seed, replicate, mode, step) to normals changes.
inline constexpr int kRngStreamVersion = 1;

/// Normal draws addressed by (seed, replicate, mode k, step i).
///
/// Stream layout (version 1): the Philox counter is
/// (pair, k, replicate_lo, replicate_hi) with pair = (i - 1) / 2 and the key is
/// (seed_lo, seed_hi). The four output words form two 53-bit uniforms which a
/// Box-Muller transform turns into the normals for steps 2*pair+1 and 2*pair+2.
class NoiseStreams {
public:
    NoiseStreams(std::uint64_t seed, std::uint64_t replicate) noexcept;

    /// Normals for steps (2*pair + 1, 2*pair + 2) of mode k.
    std::pair<double, double> normal_pair(std::uint32_t k, std::uint32_t pair) const noexcept;

    /// Normal for step i >= 1 of mode k.
    double normal(std::uint32_t k, std::uint32_t step) const noexcept;

    /// Normal pair from an auxiliary lane (mode word 0xFFFFFFFF, never used by
    /// a mode stream), for draws that are not tied to a spectral mode.
    std::pair<double, double> aux_normal_pair(std::uint32_t index) const noexcept;

private:
    Philox4x32::Key key_;
    std::uint32_t rep_lo_;
    std::uint32_t rep_hi_;
};

}  // namespace spde
