#include "spde/rng.hpp"

#include <cmath>
#include <numbers>

namespace spde {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

// 53-bit uniform in (0, 1].
inline double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

inline std::pair<double, double> box_muller(const Philox4x32::Counter& w) {
    const double u1 = to_unit_open_closed(w[0], w[1]);
    const double u2 = to_unit_open_closed(w[2], w[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

NoiseStreams::NoiseStreams(std::uint64_t seed, std::uint64_t replicate) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      rep_lo_(static_cast<std::uint32_t>(replicate)),
      rep_hi_(static_cast<std::uint32_t>(replicate >> 32)) {}

std::pair<double, double> NoiseStreams::normal_pair(std::uint32_t k,
                                                    std::uint32_t pair) const noexcept {
    return box_muller(Philox4x32::generate({pair, k, rep_lo_, rep_hi_}, key_));
}

double NoiseStreams::normal(std::uint32_t k, std::uint32_t step) const noexcept {
    const auto [first, second] = normal_pair(k, (step - 1) / 2);
    return (step % 2 == 1) ? first : second;
}

std::pair<double, double> NoiseStreams::aux_normal_pair(std::uint32_t index) const noexcept {
    return box_muller(Philox4x32::generate({index, 0xFFFFFFFFu, rep_lo_, rep_hi_}, key_));
}

}  // namespace spde
