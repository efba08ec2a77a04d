#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "spde/errors.hpp"
#include "spde/optimize.hpp"

using namespace spde;

TEST(NelderMead, Rosenbrock) {
    const auto f = [](std::span<const double> x) {
        return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
    };
    const double x0[2] = {-1.2, 1.0}, steps[2] = {0.1, 0.1};
    NelderMeadOptions opt;
    opt.f_tolerance = 1e-16;
    opt.x_tolerance = 1e-10;
    const auto r = nelder_mead(f, x0, steps, opt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.x[0], 1.0, 1e-7);
    EXPECT_NEAR(r.x[1], 1.0, 1e-7);
    for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(NelderMead, InfiniteValuesActAsBarrier) {
    const auto f = [](std::span<const double> x) {
        if (x[0] < 0.5) return std::numeric_limits<double>::infinity();
        return (x[0] - 0.2) * (x[0] - 0.2) + x[1] * x[1];
    };
    const double x0[2] = {1.0, 1.0}, steps[2] = {0.1, 0.1};
    const auto r = nelder_mead(f, x0, steps);
    EXPECT_GE(r.x[0], 0.5);
    // The simplex can stall against the barrier; it still ends close to the constrained optimum.
    EXPECT_NEAR(r.x[0], 0.5, 1e-3);
    EXPECT_NEAR(r.x[1], 0.0, 1e-3);
}

TEST(NelderMead, EvaluationBudget) {
    const auto f = [](std::span<const double> x) { return std::cos(x[0]) + x[0] * x[0] * 1e-6; };
    const double x0[1] = {0.0}, steps[1] = {1.0};
    NelderMeadOptions opt;
    opt.max_evaluations = 5;
    const auto r = nelder_mead(f, x0, steps, opt);
    EXPECT_LE(r.evaluations, 5 + 2);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(nelder_mead(f, x0, std::span<const double>{}, opt), DomainError);
}

TEST(Brent, QuadraticAndTolerance) {
    const auto r = brent_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -1.0, 2.0, 1e-10);
    EXPECT_NEAR(r.x, 0.3, 1e-9);
    const auto s = brent_minimize([](double x) { return std::abs(x - 1.7); }, 0.0, 10.0, 1e-8);
    EXPECT_NEAR(s.x, 1.7, 1e-8);
    EXPECT_THROW(brent_minimize([](double x) { return x; }, 1.0, 1.0), DomainError);
}

TEST(Brent, EndpointMinimum) {
    const auto r = brent_minimize([](double x) { return x; }, 2.0, 3.0, 1e-9);
    EXPECT_NEAR(r.x, 2.0, 1e-8);
}
