#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "spde/errors.hpp"
#include "spde/model.hpp"

using namespace spde;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kPi = std::numbers::pi;

// <f, e_k>_theta = int_0^1 e^{eta y} f(y) sqrt(2) sin(pi k y) e^{-eta y/2} dy by
// adaptive Gauss-Kronrod on subintervals short enough to resolve the sine.
double kronrod_coefficient(const std::function<double(double)>& f, double eta, long k) {
    const int pieces = static_cast<int>(std::max<long>(1, k));
    double total = 0.0;
    for (int p = 0; p < pieces; ++p) {
        const double a = static_cast<double>(p) / pieces;
        const double b = static_cast<double>(p + 1) / pieces;
        total += gauss_kronrod<double, 61>::integrate(
            [&](double y) { return f(y) * std::sqrt(2.0) * std::sin(kPi * k * y) * std::exp(eta * y / 2); }, a,
            b, 10, 1e-14);
    }
    return total;
}

}  // namespace

TEST(ThetaParams, RejectsNonPositiveTheta2) {
    EXPECT_THROW(ThetaParams(0.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(ThetaParams(0.0, 1.0, -0.1), DomainError);
    EXPECT_THROW(ThetaParams(std::nan(""), 1.0, 0.2), DomainError);
}

TEST(ThetaParams, DerivedQuantities) {
    const ThetaParams t(0.0, 1.0, 0.2);
    EXPECT_DOUBLE_EQ(t.eta(), 5.0);
    EXPECT_NEAR(t.sigma0_sq(), 1.0 / std::sqrt(0.2), 1e-15);
}

TEST(NoiseLevel, Range) {
    EXPECT_THROW(NoiseLevel(0.0), DomainError);
    EXPECT_THROW(NoiseLevel(1.5), DomainError);
    EXPECT_DOUBLE_EQ(NoiseLevel(1.0).value(), 1.0);
}

TEST(Eigenvalues, FirstEigenvalueOfFirstExample) {
    // lambda_1* = 3.22 for (0, 1, 0.2).
    EXPECT_NEAR(lambda_k(ThetaParams(0.0, 1.0, 0.2), 1), 3.22, 5e-3);
}

TEST(Eigenvalues, SecondExampleShift) {
    const ThetaParams a(0.0, 1.0, 0.2), b(3.1, 1.0, 0.2);
    for (long k : {1L, 2L, 10L}) EXPECT_NEAR(lambda_k(a, k) - lambda_k(b, k), 3.1, 1e-12);
}

TEST(Eigenfunctions, OrthonormalUnderWeightedProduct) {
    const double eta = 5.0;
    for (long k = 1; k <= 6; ++k) {
        for (long l = 1; l <= 6; ++l) {
            const double ip = gauss_kronrod<double, 61>::integrate(
                [&](double y) { return std::exp(eta * y) * eigenfunction(eta, k, y) * eigenfunction(eta, l, y); },
                0.0, 1.0, 15, 1e-14);
            EXPECT_NEAR(ip, k == l ? 1.0 : 0.0, 1e-10) << k << "," << l;
        }
    }
}

TEST(WeightedInnerProduct, MatchesKronrod) {
    const auto f = [](double y) { return y * y; };
    const auto g = [](double y) { return std::cos(y); };
    const double ref = gauss_kronrod<double, 61>::integrate(
        [&](double y) { return std::exp(1.5 * y) * f(y) * g(y); }, 0.0, 1.0, 10, 1e-14);
    EXPECT_NEAR(weighted_inner_product(f, g, 1.5), ref, 1e-12);
    EXPECT_EQ(weighted_inner_product(f, g, 1.5, 7), weighted_inner_product(f, g, 1.5, 8));  // rounded up to even
}

TEST(InitialCoefficients, ParabolaClosedFormMatchesQuadrature) {
    const ThetaParams t(0.0, 1.0, 0.2);
    const InitialCondition xi = ParabolaInitial{4.2};
    const auto x = initial_coefficients(xi, t, 40);
    for (long k = 1; k <= 40; ++k) {
        const double ref = kronrod_coefficient([](double y) { return 4.2 * y * (1 - y); }, t.eta(), k);
        EXPECT_NEAR(x[k - 1], ref, 1e-11 * std::max(1.0, std::abs(ref))) << k;
    }
}

TEST(InitialCoefficients, FirstExampleLeadingCoefficientIsAboutThree) {
    // The experiments use x_1(0) = 3 for xi(y) = 4.2 y (1 - y), eta = 5.
    const double x1 = initial_coefficients(ParabolaInitial{4.2}, ThetaParams(0.0, 1.0, 0.2), 1)[0];
    EXPECT_NEAR(x1, 3.0, 0.05);
}

TEST(InitialCoefficients, TabulatedClosedFormMatchesQuadratureOfInterpolant) {
    const ThetaParams t(0.3, -2.0, 0.5);
    std::vector<double> v(11);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double y = static_cast<double>(i) / 10.0;
        v[i] = std::sin(kPi * y) + 0.3 * y * (1 - y) * (i % 3 == 0 ? 1.0 : -1.0);
    }
    const InitialCondition xi = TabulatedInitial{v};
    const auto x = initial_coefficients(xi, t, 30);
    for (long k = 1; k <= 30; ++k) {
        // Integrate each linear piece separately so the kinks do not hurt the rule.
        double ref = 0.0;
        for (int p = 0; p < 10; ++p) {
            const double a = p / 10.0, b = (p + 1) / 10.0;
            ref += gauss_kronrod<double, 61>::integrate(
                [&](double y) {
                    const double f = v[p] + (v[p + 1] - v[p]) * (y - a) / (b - a);
                    return f * std::sqrt(2.0) * std::sin(kPi * k * y) * std::exp(t.eta() * y / 2);
                },
                a, b, 10, 1e-14);
        }
        EXPECT_NEAR(x[k - 1], ref, 1e-11) << k;
    }
}

TEST(InitialCoefficients, SingleModeQuadratureAgreesWithBatch) {
    const ThetaParams t(0.0, 1.0, 0.2);
    const InitialCondition xi = ParabolaInitial{4.2};
    const auto batch = initial_coefficients(xi, t, 200);
    for (long k : {1L, 2L, 17L, 200L}) EXPECT_NEAR(initial_coefficient(xi, t, k), batch[k - 1], 1e-9) << k;
}

TEST(InitialCoefficients, CoefficientKindPadsWithZeros) {
    const InitialCondition xi = CoefficientInitial{{3.0, -1.0}};
    const auto x = initial_coefficients(xi, ThetaParams(0, 1, 0.2), 4);
    EXPECT_EQ(x, (std::vector<double>{3.0, -1.0, 0.0, 0.0}));
    EXPECT_DOUBLE_EQ(initial_coefficient(xi, ThetaParams(0, 1, 0.2), 2), -1.0);
    EXPECT_THROW(evaluate_initial(xi, 0.5), DomainError);
}

TEST(InitialCondition, TabulatedBoundaryValidated) {
    EXPECT_THROW(validate_initial_condition(TabulatedInitial{{0.0, 1.0, 0.5}}), ConfigError);
    EXPECT_THROW(validate_initial_condition(TabulatedInitial{{0.0}}), ConfigError);
    EXPECT_NO_THROW(validate_initial_condition(TabulatedInitial{{0.0, 1.0, 0.0}}));
    EXPECT_DOUBLE_EQ(evaluate_initial(TabulatedInitial{{0.0, 1.0, 0.0}}, 0.25), 0.5);
}

TEST(Reparametrization, RoundTrip) {
    const ThetaParams t(1.0, -3.0, 0.7);
    const auto r = theta_from_reparam(t.sigma0_sq(), t.eta());
    EXPECT_NEAR(r.theta2, 0.7, 1e-14);
    EXPECT_NEAR(r.theta1, -3.0, 1e-13);
    EXPECT_THROW(theta_from_reparam(0.0, 1.0), DomainError);
}
