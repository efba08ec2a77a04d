#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "spde/rng.hpp"

using spde::NoiseStreams;
using spde::Philox4x32;

// Known-answer vectors of the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
    const auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
    const auto out = Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                          {0xffffffff, 0xffffffff});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
    const auto out = Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                          {0xa4093822, 0x299f31d0});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NoiseStreams, PairLayoutMatchesSingleDraws) {
    const NoiseStreams s(42, 3);
    const auto [a, b] = s.normal_pair(7, 5);
    EXPECT_EQ(s.normal(7, 11), a);
    EXPECT_EQ(s.normal(7, 12), b);
}

TEST(NoiseStreams, DeterministicAndDistinct) {
    const NoiseStreams s(1, 0), t(1, 0), u(1, 1), v(2, 0);
    EXPECT_EQ(s.normal(1, 1), t.normal(1, 1));
    std::set<double> seen{s.normal(1, 1), s.normal(2, 1), s.normal(1, 2), u.normal(1, 1), v.normal(1, 1),
                          s.aux_normal_pair(0).first};
    EXPECT_EQ(seen.size(), 6u);
}

TEST(NoiseStreams, MomentsOfStandardNormal) {
    const NoiseStreams s(123, 0);
    const int n = 400000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < n / 2; ++i) {
        const auto [a, b] = s.normal_pair(1, static_cast<std::uint32_t>(i));
        for (double z : {a, b}) {
            m1 += z;
            m2 += z * z;
            m3 += z * z * z;
            m4 += z * z * z * z;
        }
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // Five standard errors of each sample moment.
    EXPECT_NEAR(m1, 0.0, 5 * std::sqrt(1.0 / n));
    EXPECT_NEAR(m2, 1.0, 5 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m3, 0.0, 5 * std::sqrt(15.0 / n));
    EXPECT_NEAR(m4, 3.0, 5 * std::sqrt(96.0 / n));
}

TEST(NoiseStreams, AdjacentModesUncorrelated) {
    const NoiseStreams s(9, 4);
    const int n = 100000;
    double c = 0;
    for (int i = 1; i <= n; ++i) c += s.normal(1, i) * s.normal(2, i);
    EXPECT_NEAR(c / n, 0.0, 5.0 / std::sqrt(n));
}
