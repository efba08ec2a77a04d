#include "spde/adaptive.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spde/errors.hpp"
#include "spde/kernels.hpp"
#include "spde/optimize.hpp"

namespace spde {

ThinnedTimeGrid::ThinnedTimeGrid(long N, double T, long N2) : N_(N), N2_(N2) {
    if (N < 1) throw ConfigError("N must be >= 1");
    if (N2 < 1 || N2 > N) throw ConfigError("N2 must lie in 1..N");
    if (!(T > 0.0)) throw ConfigError("T must be > 0");
    stride_ = N / N2;
    delta_bar_ = static_cast<double>(stride_) * T / static_cast<double>(N);
}

std::vector<long> ThinnedTimeGrid::fine_indices() const {
    std::vector<long> out(static_cast<std::size_t>(N2_ + 1));
    for (long i = 0; i <= N2_; ++i) out[i] = fine_index(i);
    return out;
}

std::vector<double> approx_coordinate_weights(double eta_hat, long k, long M) {
    if (M < 1 || k < 1) throw DomainError("approx_coordinate: M and k must be >= 1");
    std::vector<double> w(static_cast<std::size_t>(M));
    const long period = 2 * M;
    for (long j = 1; j <= M; ++j) {
        const double y = static_cast<double>(j) / static_cast<double>(M);
        // Reduce k j modulo 2M so the sine argument stays small.
        const long r = (k % period) * j % period;
        const double s = std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(M));
        w[j - 1] = std::numbers::sqrt2 * s * std::exp(0.5 * eta_hat * y) / static_cast<double>(M);
    }
    return w;
}

double approx_coordinate(std::span<const double> row, double eta_hat, long k, long M) {
    if (static_cast<long>(row.size()) != M) throw DomainError("approx_coordinate: row must have M values");
    const auto w = approx_coordinate_weights(eta_hat, k, M);
    return kernels::active().dot(row.data(), w.data(), row.size());
}

double xi_factor(double lambda, double delta_bar) {
    if (!(delta_bar > 0.0)) throw DomainError("xi_factor: delta_bar must be > 0");
    const double x = lambda * delta_bar;
    if (std::abs(x) < 1e-6) return 1.0 - x + (2.0 / 3.0) * x * x;
    return -std::expm1(-2.0 * x) / (2.0 * x);
}

double quasi_loglik(double lambda, std::span<const double> series, double epsilon,
                    double delta_bar) {
    if (series.size() < 2) throw DomainError("quasi_loglik: need at least one transition");
    const double variance = epsilon * epsilon * delta_bar * xi_factor(lambda, delta_bar);
    const double phi = std::exp(-lambda * delta_bar);
    const double rss = kernels::active().ar1_residual_ss(series.data(), series.size(), phi);
    const auto transitions = static_cast<double>(series.size() - 1);
    return -(0.5 * transitions * std::log(variance) + rss / (2.0 * variance));
}

void LambdaSearch::validate() const {
    if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
        throw ConfigError("lambda interval needs 0 < lambda_min < lambda_max");
    }
    if (scan_points < 3) throw ConfigError("lambda scan needs >= 3 points");
    if (!(tolerance > 0.0)) throw ConfigError("lambda tolerance must be > 0");
}

LambdaEstimate maximize_loglik(std::span<const double> series, double epsilon, double delta_bar,
                               const LambdaSearch& search) {
    search.validate();
    LambdaEstimate est;
    const int n = search.scan_points;
    const double log_lo = std::log(search.lambda_min);
    const double log_hi = std::log(search.lambda_max);
    est.scan_lambda.resize(n);
    est.scan_loglik.resize(n);
    int best = 0;
    for (int i = 0; i < n; ++i) {
        est.scan_lambda[i] = i + 1 < n ? std::exp(log_lo + (log_hi - log_lo) * i / (n - 1))
                                       : search.lambda_max;
        est.scan_loglik[i] = quasi_loglik(est.scan_lambda[i], series, epsilon, delta_bar);
        if (est.scan_loglik[i] > est.scan_loglik[best]) best = i;
    }
    est.evaluations = n;
    if (!std::isfinite(est.scan_loglik[best])) {
        throw OptimizerError("quasi log-likelihood is not finite on the scan");
    }

    const double lo = est.scan_lambda[std::max(best - 1, 0)];
    const double hi = est.scan_lambda[std::min(best + 1, n - 1)];
    const auto refined = brent_minimize(
        [&](double lam) { return -quasi_loglik(lam, series, epsilon, delta_bar); }, lo, hi,
        search.tolerance);
    est.evaluations += refined.evaluations;
    if (-refined.value >= est.scan_loglik[best]) {
        est.lambda_hat = refined.x;
        est.loglik = -refined.value;
    } else {
        est.lambda_hat = est.scan_lambda[best];
        est.loglik = est.scan_loglik[best];
    }

    const double margin = 0.01 * (log_hi - log_lo);
    const double pos = std::log(est.lambda_hat);
    if (pos - log_lo < margin || log_hi - pos < margin) est.warnings.emplace_back("lambda_boundary");
    return est;
}

double theta0_hat(double lambda1_hat, double theta1_hat, double theta2_hat) {
    if (!(theta2_hat > 0.0)) throw DomainError("theta0_hat: theta2_hat must be > 0");
    return -lambda1_hat + theta1_hat * theta1_hat / (4.0 * theta2_hat) +
           std::numbers::pi * std::numbers::pi * theta2_hat;
}

}  // namespace spde
