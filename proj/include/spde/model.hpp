#pragma once

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace spde {

/// Drift coefficients of
///   dX = (theta2 X'' + theta1 X' + theta0 X) dt + eps dB,  X_t(0) = X_t(1) = 0.
/// theta2 must be strictly positive.
class ThetaParams {
public:
    ThetaParams(double theta0, double theta1, double theta2);

    double theta0() const noexcept { return theta0_; }
    double theta1() const noexcept { return theta1_; }
    double theta2() const noexcept { return theta2_; }

    /// eta = theta1 / theta2, the exponent rate of the eigenfunction envelope.
    double eta() const noexcept { return theta1_ / theta2_; }
    /// sigma0^2 = 1 / sqrt(theta2).
    double sigma0_sq() const noexcept;

    bool operator==(const ThetaParams&) const = default;

private:
    double theta0_;
    double theta1_;
    double theta2_;
};

/// Known dispersion parameter, 0 < epsilon <= 1.
class NoiseLevel {
public:
    explicit NoiseLevel(double epsilon);
    double value() const noexcept { return epsilon_; }

private:
    double epsilon_;
};

/// xi(y) = c * y * (1 - y).
struct ParabolaInitial {
    double c = 0.0;
};

/// xi sampled on the uniform grid y_i = i / (n - 1), i = 0..n-1, linearly interpolated.
struct TabulatedInitial {
    std::vector<double> values;
};

/// x_k(0) given directly for k = 1..size(); higher modes start at zero.
struct CoefficientInitial {
    std::vector<double> values;
};

using InitialCondition = std::variant<ParabolaInitial, TabulatedInitial, CoefficientInitial>;

/// Throws ConfigError when a tabulated profile violates the Dirichlet boundary.
void validate_initial_condition(const InitialCondition& xi);

/// Evaluates xi(y); CoefficientInitial is not a pointwise profile and throws.
double evaluate_initial(const InitialCondition& xi, double y);

std::string describe(const InitialCondition& xi);

inline constexpr int kDefaultQuadratureNodes = 2048;

/// lambda_k = -theta0 + theta1^2 / (4 theta2) + pi^2 k^2 theta2.
double lambda_k(const ThetaParams& theta, long k);

/// e_k(y) = sqrt(2) sin(pi k y) exp(-eta y / 2).
double eigenfunction(double eta, long k, double y);

/// Composite Simpson approximation of int_0^1 e^{eta y} f(y) g(y) dy on
/// quadrature_n intervals (rounded up to even).
double weighted_inner_product(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double eta,
                              int quadrature_n = kDefaultQuadratureNodes);

/// x_k(0) = <xi, e_k>_theta. Quadrature is refined with k so the node count
/// always resolves the oscillation of e_k.
double initial_coefficient(const InitialCondition& xi, const ThetaParams& theta, long k,
                           int quadrature_n = kDefaultQuadratureNodes);

/// x_k(0) for k = 1..K. Parabolic and tabulated profiles are integrated in
/// closed form (exact for the piecewise-linear interpolant), so the result
/// stays accurate for K far beyond any practical quadrature grid.
std::vector<double> initial_coefficients(const InitialCondition& xi, const ThetaParams& theta,
                                         long K);

struct ReparamTheta {
    double theta2;
    double theta1;
};

/// Inverse of (theta2, theta1) -> (1/sqrt(theta2), theta1/theta2).
ReparamTheta theta_from_reparam(double sigma0_sq, double eta);

}  // namespace spde
