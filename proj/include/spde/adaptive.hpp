#pragma once

#include <span>
#include <string>
#include <vector>

namespace spde {

/// Thinned times s_i = i floor(N / N2) T / N, i = 0..N2, spacing delta_bar.
class ThinnedTimeGrid {
public:
    ThinnedTimeGrid(long N, double T, long N2);

    long N() const noexcept { return N_; }
    long N2() const noexcept { return N2_; }
    long stride() const noexcept { return stride_; }
    double delta_bar() const noexcept { return delta_bar_; }
    double time(long i) const noexcept { return static_cast<double>(i) * delta_bar_; }
    /// Index of s_i on the fine time grid.
    long fine_index(long i) const noexcept { return i * stride_; }
    std::vector<long> fine_indices() const;

private:
    long N_;
    long N2_;
    long stride_;
    double delta_bar_;
};

struct ApproxCoordinateSeries {
    long k = 1;
    double eta_hat = 0.0;
    std::vector<double> values;  // x_hat_k(s_i), i = 0..N2
};

/// Weights sqrt(2) sin(pi k y_j) e^{eta_hat y_j / 2} / M on y_j = j / M, j = 1..M.
std::vector<double> approx_coordinate_weights(double eta_hat, long k, long M);

/// x_hat_k(t) = (1/M) sum_j X_t(y_j) sqrt(2) sin(pi k y_j) e^{eta_hat y_j / 2}.
double approx_coordinate(std::span<const double> row, double eta_hat, long k, long M);

/// Xi(lambda) = (1 - e^{-2 lambda delta_bar}) / (2 lambda delta_bar), Xi(0) = 1.
double xi_factor(double lambda, double delta_bar);

/// Gaussian OU transition log-likelihood of the series, with per-step
/// variance eps^2 delta_bar Xi(lambda), without the -n/2 log(2 pi) constant.
double quasi_loglik(double lambda, std::span<const double> series, double epsilon,
                    double delta_bar);

struct LambdaSearch {
    double lambda_min = 1e-6;
    double lambda_max = 200.0;
    int scan_points = 256;  // log-spaced
    double tolerance = 1e-8;

    void validate() const;
};

struct LambdaEstimate {
    double lambda_hat = 0.0;
    double loglik = 0.0;
    int evaluations = 0;
    std::vector<double> scan_lambda;
    std::vector<double> scan_loglik;
    std::vector<std::string> warnings;
};

/// Scan then Brent refinement of argmax_lambda quasi_loglik.
LambdaEstimate maximize_loglik(std::span<const double> series, double epsilon, double delta_bar,
                               const LambdaSearch& search = {});

/// theta0_hat = -lambda1_hat + theta1_hat^2 / (4 theta2_hat) + pi^2 theta2_hat.
double theta0_hat(double lambda1_hat, double theta1_hat, double theta2_hat);

}  // namespace spde
