#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spde/model.hpp"

namespace spde {

/// Plain 2x2 matrix, row-major.
struct Mat2 {
    std::array<double, 4> a{};

    double operator()(int r, int c) const noexcept { return a[2 * r + c]; }
    double& operator()(int r, int c) noexcept { return a[2 * r + c]; }

    double det() const noexcept { return a[0] * a[3] - a[1] * a[2]; }
    Mat2 transpose() const noexcept { return {{a[0], a[2], a[1], a[3]}}; }
    /// Adjugate inverse; throws NumericalError when the condition number
    /// (2-norm) exceeds max_condition.
    Mat2 inverse(double max_condition = 1e12) const;
    double condition_number() const noexcept;

    friend Mat2 operator*(const Mat2& x, const Mat2& y) noexcept;
    friend Mat2 operator*(double s, const Mat2& x) noexcept;
};

/// I(r) = 2 sqrt(r+1) - sqrt(r+2) - sqrt(r), evaluated without cancellation.
double gamma_term(long r);

/// (1/pi) sum_{r=0}^{R-1} I(r)^2 + 2/pi.
double gamma_partial(long terms);

struct GammaResult {
    double value = 0.0;
    long terms = 0;
    double tail_bound = 0.0;  // bound on the omitted part of the series (already / pi)
};

/// Gamma = (1/pi) sum_{r>=0} I(r)^2 + 2/pi, truncated once the analytic tail
/// bound sum_{r>=R} I(r)^2 <= 1 / (32 (R-1)^2) drops below tolerance.
GammaResult gamma_const(double tolerance = 1e-12);

/// int_a^b y^p e^{-c y} dy for p in {0, 1, 2}, stable for c -> 0.
double exp_moment(int p, double c, double a, double b);

struct UvMatrices {
    Mat2 U;
    Mat2 V;
};

/// U uses e^{-4 eta y}, V uses e^{-2 eta y} on [delta, 1 - delta], with
/// off-diagonals scaled by -1/sqrt(theta2) and the (2,2) entry by 1/theta2.
UvMatrices uv_matrices(double eta_star, double theta2_star, double delta);

/// Jacobian of (theta2, theta1) with respect to (sigma0_sq, eta).
Mat2 w_matrix(double theta1_star, double theta2_star);

/// x1(0)^2 (1 - e^{-2 lambda T}) / (2 lambda); T = 1 gives the printed form.
double g_fisher(double lambda_star, double x1_0, double horizon = 1.0);

struct AsymptoticCovariance {
    double gamma = 0.0;
    Mat2 U, V, W;
    Mat2 J;  // covariance limit of sqrt(Nm) (theta2_hat - theta2, theta1_hat - theta1)
    Mat2 K;  // covariance limit of sqrt(Nm) (sigma0_sq_hat - ., eta_hat - .)
    double v_condition = 0.0;
    double delta = 0.0;
    double g_fisher = 0.0;
    double lambda1_star = 0.0;
    double horizon = 1.0;
    std::vector<std::string> warnings;
};

/// J = (pi Gamma / theta2) W V^-1 U V^-1 W^T and K = (pi Gamma / theta2) V^-1 U V^-1.
/// When use_horizon is false the Fisher term ignores T (printed T = 1 form).
AsymptoticCovariance covariance_matrices(const ThetaParams& theta_star, double delta, double x1_0,
                                         double horizon = 1.0, bool use_horizon = true);

struct Standardized {
    double theta2 = 0.0;  // sqrt(Nm) (theta2_hat - theta2*)
    double theta1 = 0.0;  // sqrt(Nm) (theta1_hat - theta1*)
    double theta0 = 0.0;  // (theta0_hat - theta0*) / eps
};

Standardized standardize(double theta0_hat, double theta1_hat, double theta2_hat,
                         const ThetaParams& truth, long N, long m, double epsilon);

nlohmann::ordered_json to_json(const Mat2& m);
nlohmann::ordered_json to_json(const AsymptoticCovariance& cov, const ThetaParams& theta_star,
                               double x1_0);

}  // namespace spde
