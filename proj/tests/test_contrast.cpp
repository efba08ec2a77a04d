#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spde/contrast.hpp"
#include "spde/errors.hpp"

using namespace spde;

namespace {

RealizedVariations exact_curve(double sigma0_sq, double eta, double eps, const std::vector<double>& sites) {
    RealizedVariations rv;
    rv.epsilon = eps;
    rv.sites = sites;
    for (double y : sites) rv.z.push_back(eps * eps * sigma0_sq / std::sqrt(std::numbers::pi) * std::exp(-eta * y));
    return rv;
}

}  // namespace

TEST(ThinnedSpatialGrid, SitesFollowTheStrideFormula) {
    const ThinnedSpatialGrid g(2000, 0.05, 63);
    EXPECT_EQ(g.m_bar(), 1 + 1800);
    EXPECT_EQ(g.stride(), 1801 / 63);
    ASSERT_EQ(g.sites().size(), 63u);
    for (long j = 1; j <= 63; ++j) {
        EXPECT_NEAR(g.sites()[j - 1], 0.05 + static_cast<double>(g.stride() * (j - 1)) / 2000.0, 1e-15);
        EXPECT_GE(g.sites()[j - 1], 0.05);
        EXPECT_LE(g.sites()[j - 1], 0.95);
    }
}

TEST(ThinnedSpatialGrid, PaperScaleGridAndLimits) {
    const ThinnedSpatialGrid g(10000, 0.05, 99);
    EXPECT_EQ(g.m_bar(), 9001);
    EXPECT_EQ(g.stride(), 90);
    EXPECT_NEAR(g.sites().back(), 0.05 + 90.0 * 98 / 10000, 1e-15);
    EXPECT_THROW(ThinnedSpatialGrid(100, 0.05, 92), ConfigError);
    EXPECT_NO_THROW(ThinnedSpatialGrid(100, 0.05, 91));
    EXPECT_THROW(ThinnedSpatialGrid(100, 0.5, 3), ConfigError);
}

TEST(RealizedVariation, KnownColumn) {
    const std::vector<double> col{0.0, 1.0, -1.0, 0.0, 2.0};
    const double expected = (1 + 4 + 1 + 4) / (4 * std::sqrt(0.5 / 4));
    EXPECT_NEAR(realized_variation(col, 4, 0.5), expected, 1e-14);
    EXPECT_THROW(realized_variation(col, 3, 0.5), DomainError);
}

TEST(Contrast, ZeroAtTruthAndPositiveElsewhere) {
    const std::vector<double> sites{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto rv = exact_curve(2.236, 5.0, 0.1, sites);
    EXPECT_NEAR(contrast(2.236, 5.0, rv), 0.0, 1e-24);
    EXPECT_GT(contrast(2.3, 5.0, rv), 0.0);
    EXPECT_THROW(contrast(0.0, 5.0, rv), DomainError);
}

TEST(MinimizeContrast, RecoversExactCurve) {
    std::vector<double> sites;
    for (int j = 0; j < 63; ++j) sites.push_back(0.05 + j * 0.9 / 62);
    for (auto [s, e] : {std::pair{1.0 / std::sqrt(0.2), 5.0}, std::pair{0.8, -3.0}, std::pair{12.0, 0.5}}) {
        const auto rv = exact_curve(s, e, 0.25, sites);
        const auto est = minimize_contrast(rv);
        EXPECT_NEAR(est.sigma0_sq_hat, s, 1e-6 * s);
        EXPECT_NEAR(est.eta_hat, e, 1e-6);
        EXPECT_NEAR(est.theta2_hat, std::pow(s, -2.0), 1e-5 * std::pow(s, -2.0));
        EXPECT_LE(est.contrast_value, est.grid_best_value);
        EXPECT_TRUE(est.converged);
        EXPECT_TRUE(est.warnings.empty());
        for (std::size_t i = 1; i < est.trace.size(); ++i) EXPECT_LE(est.trace[i], est.trace[i - 1]);
    }
}

TEST(MinimizeContrast, BoundaryAndIdentifiabilityWarnings) {
    const auto rv = exact_curve(1.0, 25.0, 0.1, {0.2, 0.4, 0.6});
    const auto est = minimize_contrast(rv);
    EXPECT_NE(std::find(est.warnings.begin(), est.warnings.end(), "contrast_boundary"), est.warnings.end());
    const auto single = minimize_contrast(exact_curve(1.0, 1.0, 0.1, {0.5}));
    EXPECT_EQ(single.warnings.front(), "contrast_non_identifiable");
}

TEST(ContrastSearchBox, Validation) {
    ContrastSearchBox b;
    b.eta_min = 1;
    b.eta_max = 0;
    EXPECT_THROW(b.validate(), ConfigError);
    ContrastSearchBox c;
    c.grid_points = 1;
    EXPECT_THROW(c.validate(), ConfigError);
}
