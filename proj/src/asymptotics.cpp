#include "spde/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spde/errors.hpp"

namespace spde {

namespace {
constexpr double kPi = std::numbers::pi;
}

Mat2 operator*(const Mat2& x, const Mat2& y) noexcept {
    return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
             x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

Mat2 operator*(double s, const Mat2& x) noexcept {
    return {{s * x.a[0], s * x.a[1], s * x.a[2], s * x.a[3]}};
}

double Mat2::condition_number() const noexcept {
    // s_max^2 + s_min^2 = |A|_F^2 and s_max s_min = |det A|.
    const double fro = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
    const double d = std::abs(det());
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    const double big = 0.5 * (fro + std::sqrt(std::max(0.0, (fro - 2.0 * d) * (fro + 2.0 * d))));
    return big / d;
}

Mat2 Mat2::inverse(double max_condition) const {
    const double d = det();
    const double cond = condition_number();
    if (d == 0.0 || !(cond <= max_condition)) {
        throw NumericalError("2x2 matrix is numerically singular (condition " + std::to_string(cond) + ")");
    }
    return {{a[3] / d, -a[1] / d, -a[2] / d, a[0] / d}};
}

double gamma_term(long r) {
    // 2 sqrt(r+1) - sqrt(r+2) - sqrt(r) rewritten as a product of positive sums.
    const double s0 = std::sqrt(static_cast<double>(r));
    const double s1 = std::sqrt(static_cast<double>(r + 1));
    const double s2 = std::sqrt(static_cast<double>(r + 2));
    return 2.0 / ((s2 + s0) * (s1 + s0) * (s2 + s1));
}

double gamma_partial(long terms) {
    // Smallest terms first.
    double sum = 0.0;
    for (long r = terms - 1; r >= 0; --r) {
        const double t = gamma_term(r);
        sum += t * t;
    }
    return sum / kPi + 2.0 / kPi;
}

GammaResult gamma_const(double tolerance) {
    if (!(tolerance > 0.0)) throw DomainError("gamma_const: tolerance must be > 0");
    // I(r) <= (1/4) r^{-3/2}, so sum_{r>=R} I(r)^2 <= 1 / (32 (R-1)^2).
    long R = 2;
    auto tail = [](long R) {
        const double rm1 = static_cast<double>(R - 1);
        return 1.0 / (32.0 * rm1 * rm1) / kPi;
    };
    while (tail(R) >= tolerance) R *= 2;
    return {gamma_partial(R), R, tail(R)};
}

double exp_moment(int p, double c, double a, double b) {
    if (p < 0 || p > 2) throw DomainError("exp_moment: p must be 0, 1 or 2");
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(c) * scale < 0.5) {
        // Power series of e^{-c y}; the ratio |c| scale < 1/2 bounds the tail.
        double sum = 0.0;
        double coeff = 1.0;  // (-c)^n / n!
        for (int n = 0; n < 80; ++n) {
            const int q = p + n + 1;
            const double term = coeff * (std::pow(b, q) - std::pow(a, q)) / q;
            sum += term;
            if (n > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
            coeff *= -c / (n + 1);
        }
        return sum;
    }
    // Antiderivative -e^{-c y} (y^p/c + p y^{p-1}/c^2 + p(p-1) y^{p-2}/c^3).
    auto antiderivative = [&](double y) {
        double poly = 0.0;
        if (p == 0) poly = 1.0 / c;
        if (p == 1) poly = y / c + 1.0 / (c * c);
        if (p == 2) poly = y * y / c + 2.0 * y / (c * c) + 2.0 / (c * c * c);
        return -std::exp(-c * y) * poly;
    };
    return antiderivative(b) - antiderivative(a);
}

UvMatrices uv_matrices(double eta_star, double theta2_star, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw DomainError("uv_matrices: delta must lie in (0, 1/2)");
    if (!(theta2_star > 0.0)) throw DomainError("uv_matrices: theta2 must be > 0");
    const double lo = delta, hi = 1.0 - delta;
    const double inv_sqrt = 1.0 / std::sqrt(theta2_star);
    auto build = [&](double rate) {
        const double c = rate * eta_star;
        const double m1 = exp_moment(1, c, lo, hi);
        return Mat2{{exp_moment(0, c, lo, hi), -inv_sqrt * m1, -inv_sqrt * m1,
                     exp_moment(2, c, lo, hi) / theta2_star}};
    };
    return {build(4.0), build(2.0)};
}

Mat2 w_matrix(double theta1_star, double theta2_star) {
    if (!(theta2_star > 0.0)) throw DomainError("w_matrix: theta2 must be > 0");
    return {{-2.0 * std::pow(theta2_star, 1.5), 0.0, -2.0 * theta1_star * std::sqrt(theta2_star),
             theta2_star}};
}

double g_fisher(double lambda_star, double x1_0, double horizon) {
    if (!(lambda_star > 0.0)) throw DomainError("g_fisher: lambda must be > 0");
    return x1_0 * x1_0 * horizon * (-std::expm1(-2.0 * lambda_star * horizon)) /
           (2.0 * lambda_star * horizon);
}

AsymptoticCovariance covariance_matrices(const ThetaParams& theta_star, double delta, double x1_0,
                                         double horizon, bool use_horizon) {
    AsymptoticCovariance cov;
    cov.delta = delta;
    cov.gamma = gamma_const().value;
    const auto uv = uv_matrices(theta_star.eta(), theta_star.theta2(), delta);
    cov.U = uv.U;
    cov.V = uv.V;
    cov.W = w_matrix(theta_star.theta1(), theta_star.theta2());
    cov.v_condition = cov.V.condition_number();
    const Mat2 v_inv = cov.V.inverse();
    const double scale = kPi * cov.gamma / theta_star.theta2();
    cov.K = scale * (v_inv * cov.U * v_inv);
    cov.J = scale * (cov.W * v_inv * cov.U * v_inv * cov.W.transpose());
    // Symmetrize away rounding in the products.
    cov.K(0, 1) = cov.K(1, 0) = 0.5 * (cov.K(0, 1) + cov.K(1, 0));
    cov.J(0, 1) = cov.J(1, 0) = 0.5 * (cov.J(0, 1) + cov.J(1, 0));

    cov.lambda1_star = lambda_k(theta_star, 1);
    cov.horizon = use_horizon ? horizon : 1.0;
    if (use_horizon && horizon != 1.0) cov.warnings.emplace_back("fisher_horizon_extrapolated");
    if (cov.lambda1_star > 0.0) {
        cov.g_fisher = g_fisher(cov.lambda1_star, x1_0, cov.horizon);
        if (x1_0 == 0.0) cov.warnings.emplace_back("fisher_degenerate_x1_0");
    } else {
        cov.g_fisher = std::nan("");
        cov.warnings.emplace_back("lambda1_not_positive");
    }
    return cov;
}

Standardized standardize(double theta0_hat, double theta1_hat, double theta2_hat,
                         const ThetaParams& truth, long N, long m, double epsilon) {
    const double root = std::sqrt(static_cast<double>(N) * static_cast<double>(m));
    return {root * (theta2_hat - truth.theta2()), root * (theta1_hat - truth.theta1()),
            (theta0_hat - truth.theta0()) / epsilon};
}

nlohmann::ordered_json to_json(const Mat2& m) {
    return nlohmann::ordered_json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}});
}

nlohmann::ordered_json to_json(const AsymptoticCovariance& cov, const ThetaParams& theta_star,
                               double x1_0) {
    nlohmann::ordered_json j;
    j["theta_star"] = {{"theta0", theta_star.theta0()},
                       {"theta1", theta_star.theta1()},
                       {"theta2", theta_star.theta2()}};
    j["eta_star"] = theta_star.eta();
    j["sigma0_sq_star"] = theta_star.sigma0_sq();
    j["lambda1_star"] = cov.lambda1_star;
    j["x1_0"] = x1_0;
    j["delta"] = cov.delta;
    j["horizon"] = cov.horizon;
    j["gamma"] = cov.gamma;
    j["U"] = to_json(cov.U);
    j["V"] = to_json(cov.V);
    j["V_condition"] = cov.v_condition;
    j["W"] = to_json(cov.W);
    j["K"] = to_json(cov.K);
    j["J"] = to_json(cov.J);
    j["g_fisher"] = cov.g_fisher;
    j["g_fisher_inverse"] = cov.g_fisher > 0.0 ? 1.0 / cov.g_fisher : std::nan("");
    j["warnings"] = cov.warnings;
    return j;
}

}  // namespace spde
