#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <gtest/gtest.h>

#include "spde/adaptive.hpp"
#include "spde/errors.hpp"
#include "spde/model.hpp"
#include "spde/rng.hpp"
#include "spde/simulator.hpp"

using namespace spde;

namespace {

// Exact Gaussian transition log-density, written out directly.
long double reference_loglik(long double lambda, const std::vector<double>& x, long double eps, long double dbar) {
    const long double phi = std::exp(-lambda * dbar);
    const long double var = eps * eps * (1 - std::exp(-2 * lambda * dbar)) / (2 * lambda);
    long double ll = 0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const long double r = x[i] - phi * x[i - 1];
        ll += -0.5L * std::log(2 * std::numbers::pi_v<long double> * var) - r * r / (2 * var);
    }
    return ll;
}

std::vector<double> decay_series(double lambda, double x0, double dbar, long n) {
    std::vector<double> v(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) v[i] = x0 * std::exp(-lambda * dbar * static_cast<double>(i));
    return v;
}

}  // namespace

TEST(ThinnedTimeGrid, StrideAndSpacing) {
    const ThinnedTimeGrid g(10000, 1.0, 500);
    EXPECT_EQ(g.stride(), 20);
    EXPECT_DOUBLE_EQ(g.delta_bar(), 20.0 / 10000.0);
    EXPECT_EQ(g.fine_index(500), 10000);
    const ThinnedTimeGrid h(2000, 2.0, 300);
    EXPECT_EQ(h.stride(), 6);
    EXPECT_DOUBLE_EQ(h.delta_bar(), 6 * 2.0 / 2000);
    EXPECT_EQ(h.fine_indices().back(), 1800);
    EXPECT_THROW(ThinnedTimeGrid(10, 1.0, 11), ConfigError);
}

TEST(ApproxCoordinate, WeightsAndExactProjectionOfSingleMode) {
    const long M = 400;
    const double eta = 5.0;
    const auto w = approx_coordinate_weights(eta, 3, M);
    for (long j = 1; j <= M; j += 37) {
        const double y = static_cast<double>(j) / M;
        EXPECT_NEAR(w[j - 1], std::sqrt(2.0) * std::sin(std::numbers::pi * 3 * y) * std::exp(eta * y / 2) / M, 1e-15);
    }
    // A field made of mode 1 alone is projected back exactly by the Riemann sum.
    std::vector<double> row(M);
    for (long j = 1; j <= M; ++j) row[j - 1] = 2.5 * eigenfunction(eta, 1, static_cast<double>(j) / M);
    EXPECT_NEAR(approx_coordinate(row, eta, 1, M), 2.5, 1e-12);
    EXPECT_NEAR(approx_coordinate(row, eta, 2, M), 0.0, 1e-12);
    EXPECT_THROW(approx_coordinate(row, eta, 1, M + 1), DomainError);
}

TEST(XiFactor, SeriesAndClosedFormAgree) {
    EXPECT_DOUBLE_EQ(xi_factor(0.0, 0.01), 1.0);
    for (double lam : {1e-9, 9.9e-5, 1.01e-4, 1.0, 50.0, -2.0}) {
        const long double x = static_cast<long double>(lam) * 0.01L;
        const long double ref = x == 0 ? 1.0L : -std::expm1(-2 * x) / (2 * x);
        EXPECT_NEAR(xi_factor(lam, 0.01), static_cast<double>(ref), 1e-15) << lam;
    }
}

TEST(QuasiLoglik, MatchesReferenceDensityUpToConstant) {
    const NoiseStreams s(3, 0);
    std::vector<double> x{3.0};
    for (int i = 1; i <= 200; ++i) x.push_back(ou_step(x.back(), 3.22, 0.1, 0.005, s.normal(1, i)));
    const double c = 200 * 0.5 * std::log(2 * std::numbers::pi);
    for (double lam : {0.5, 3.22, 10.0}) {
        EXPECT_NEAR(quasi_loglik(lam, x, 0.1, 0.005) - c, static_cast<double>(reference_loglik(lam, x, 0.1L, 0.005L)),
                    1e-9);
    }
}

TEST(MaximizeLoglik, NoiseFreeDecayAtSmallEpsilon) {
    const auto x = decay_series(3.22, 3.0, 1.0 / 500, 500);
    const auto est = maximize_loglik(x, 1e-4, 1.0 / 500);
    EXPECT_NEAR(est.lambda_hat, 3.22, 1e-6);
    EXPECT_TRUE(est.warnings.empty());
}

TEST(MaximizeLoglik, NoiseFreeDecayMatchesIndependentArgmaxAtLargerEpsilon) {
    // With eps > 0 the log-determinant term shifts the argmax away from lambda*
    // by about n eps^2 / (2 sum x^2); compare with an independent maximizer.
    const double dbar = 1.0 / 500;
    const auto x = decay_series(3.22, 3.0, dbar, 500);
    for (double eps : {0.01, 0.1}) {
        const auto est = maximize_loglik(x, eps, dbar);
        const auto [arg, val] = boost::math::tools::brent_find_minima(
            [&](long double l) { return -reference_loglik(l, x, eps, dbar); }, 1.0L, 10.0L, 60);
        EXPECT_NEAR(est.lambda_hat, static_cast<double>(arg), 1e-7) << eps;
        (void)val;
    }
    EXPECT_GT(std::abs(maximize_loglik(x, 0.1, dbar).lambda_hat - 3.22), 1e-3);
}

TEST(MaximizeLoglik, BoundaryWarning) {
    const auto x = decay_series(500.0, 3.0, 1.0 / 500, 50);
    const auto est = maximize_loglik(x, 1e-3, 1.0 / 500);
    EXPECT_EQ(est.warnings, std::vector<std::string>{"lambda_boundary"});
}

TEST(MaximizeLoglik, ScanIsLogSpaced) {
    const auto x = decay_series(3.22, 3.0, 0.01, 100);
    LambdaSearch s;
    s.scan_points = 5;
    s.lambda_min = 0.01;
    s.lambda_max = 100;
    const auto est = maximize_loglik(x, 0.01, 0.01, s);
    ASSERT_EQ(est.scan_lambda.size(), 5u);
    EXPECT_NEAR(est.scan_lambda[1], 0.1, 1e-12);
    EXPECT_DOUBLE_EQ(est.scan_lambda[4], 100.0);
}

TEST(Theta0Hat, InvertsLambda) {
    for (const ThetaParams t : {ThetaParams(0.0, 1.0, 0.2), ThetaParams(3.1, 1.0, 0.2), ThetaParams(-2.0, -4.0, 1.5)}) {
        EXPECT_NEAR(theta0_hat(lambda_k(t, 1), t.theta1(), t.theta2()), t.theta0(), 1e-13);
    }
    EXPECT_THROW(theta0_hat(1.0, 1.0, 0.0), DomainError);
}
