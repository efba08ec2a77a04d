#include "spde/contrast.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "spde/errors.hpp"
#include "spde/kernels.hpp"
#include "spde/optimize.hpp"

namespace spde {

namespace {
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);
}

ThinnedSpatialGrid::ThinnedSpatialGrid(long M, double delta, long m)
    : M_(M), delta_(delta), m_(m) {
    if (M < 1) throw ConfigError("M must be >= 1");
    if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
    // Guard the floor against representation error in (1 - 2 delta) M.
    m_bar_ = 1 + static_cast<long>(std::floor((1.0 - 2.0 * delta) * static_cast<double>(M) + 1e-9));
    if (m < 1 || m > m_bar_) {
        throw ConfigError("m must lie in 1.." + std::to_string(m_bar_) + " for this M and delta");
    }
    stride_ = m_bar_ / m;
    sites_.resize(static_cast<std::size_t>(m));
    for (long j = 1; j <= m; ++j) {
        sites_[j - 1] = delta + static_cast<double>(stride_ * (j - 1)) / static_cast<double>(M);
    }
}

double realized_variation(std::span<const double> column, long N, double T) {
    if (static_cast<long>(column.size()) != N + 1) {
        throw DomainError("realized_variation: column must hold N + 1 values");
    }
    const double ss = kernels::active().squared_increments(column.data(), column.size());
    return ss / (static_cast<double>(N) * std::sqrt(T / static_cast<double>(N)));
}

double contrast_target(double sigma0_sq, double eta, double y) {
    return sigma0_sq * kInvSqrtPi * std::exp(-eta * y);
}

double contrast(double sigma0_sq, double eta, const RealizedVariations& rv) {
    if (!(sigma0_sq > 0.0)) throw DomainError("contrast: sigma0_sq must be > 0");
    if (rv.z.empty() || rv.z.size() != rv.sites.size()) {
        throw DomainError("contrast: realized variations and sites must match and be non-empty");
    }
    const double inv_eps2 = 1.0 / (rv.epsilon * rv.epsilon);
    double acc = 0.0;
    for (std::size_t j = 0; j < rv.z.size(); ++j) {
        const double r = rv.z[j] * inv_eps2 - contrast_target(sigma0_sq, eta, rv.sites[j]);
        acc += r * r;
    }
    return acc / static_cast<double>(rv.z.size());
}

void ContrastSearchBox::validate() const {
    if (!(sigma0_sq_min > 0.0 && sigma0_sq_min < sigma0_sq_max)) {
        throw ConfigError("contrast box needs 0 < sigma0_sq_min < sigma0_sq_max");
    }
    if (!(eta_min < eta_max)) throw ConfigError("contrast box needs eta_min < eta_max");
    if (grid_points < 2) throw ConfigError("contrast grid needs >= 2 points per axis");
}

ContrastEstimate minimize_contrast(const RealizedVariations& rv, const ContrastSearchBox& box) {
    box.validate();
    ContrastEstimate est;
    if (rv.z.size() < 2) est.warnings.emplace_back("contrast_non_identifiable");

    const int g = box.grid_points;
    const double log_lo = std::log(box.sigma0_sq_min);
    const double log_hi = std::log(box.sigma0_sq_max);
    const double log_step = (log_hi - log_lo) / (g - 1);
    const double eta_step = (box.eta_max - box.eta_min) / (g - 1);

    // Scan: eta outer, sigma0_sq inner, strict improvement -> smallest eta,
    // then smallest sigma0_sq, wins ties.
    double best = std::numeric_limits<double>::infinity();
    int best_s = 0, best_e = 0;
    for (int ie = 0; ie < g; ++ie) {
        const double eta = box.eta_min + ie * eta_step;
        for (int is = 0; is < g; ++is) {
            const double value = contrast(std::exp(log_lo + is * log_step), eta, rv);
            if (value < best) {
                best = value;
                best_s = is;
                best_e = ie;
            }
        }
    }
    if (!std::isfinite(best)) throw OptimizerError("contrast is not finite anywhere on the grid");
    est.grid_best_value = best;
    est.trace.push_back(best);

    const double s0 = std::exp(log_lo + best_s * log_step);
    const double e0 = box.eta_min + best_e * eta_step;
    const double start[2] = {s0, e0};
    // One grid cell, pointing into the box.
    const double s_step = (best_s + 1 < g) ? s0 * (std::exp(log_step) - 1.0)
                                           : -s0 * (1.0 - std::exp(-log_step));
    const double e_step = (best_e + 1 < g) ? eta_step : -eta_step;
    const double steps[2] = {s_step, e_step};

    auto objective = [&](std::span<const double> p) {
        if (p[0] < box.sigma0_sq_min || p[0] > box.sigma0_sq_max || p[1] < box.eta_min ||
            p[1] > box.eta_max) {
            return std::numeric_limits<double>::infinity();
        }
        return contrast(p[0], p[1], rv);
    };
    NelderMeadOptions options;
    NelderMeadResult fit = nelder_mead(objective, start, steps, options);
    // A collapsed simplex can stall short of the optimum; restart once from the incumbent.
    if (fit.converged && fit.evaluations < options.max_evaluations) {
        NelderMeadOptions again = options;
        again.max_evaluations = options.max_evaluations - fit.evaluations;
        const double restart_steps[2] = {std::max(1e-6, 1e-3 * std::abs(fit.x[0])) *
                                             (fit.x[0] * 1.001 <= box.sigma0_sq_max ? 1.0 : -1.0),
                                         (fit.x[1] + 1e-3 <= box.eta_max ? 1e-3 : -1e-3)};
        NelderMeadResult polish = nelder_mead(objective, fit.x, restart_steps, again);
        polish.evaluations += fit.evaluations;
        polish.iterations += fit.iterations;
        if (polish.value <= fit.value) {
            fit.trace.insert(fit.trace.end(), polish.trace.begin(), polish.trace.end());
            polish.trace = std::move(fit.trace);
            fit = std::move(polish);
        } else {
            fit.evaluations = polish.evaluations;
            fit.iterations = polish.iterations;
        }
    }

    if (!std::isfinite(fit.value) || fit.value > best) {
        throw OptimizerError("contrast refinement did not improve on the grid scan");
    }
    for (double v : fit.trace) est.trace.push_back(std::min(v, est.trace.back()));

    est.sigma0_sq_hat = fit.x[0];
    est.eta_hat = fit.x[1];
    const auto theta = theta_from_reparam(est.sigma0_sq_hat, est.eta_hat);
    est.theta1_hat = theta.theta1;
    est.theta2_hat = theta.theta2;
    est.contrast_value = fit.value;
    est.evaluations = fit.evaluations + g * g;
    est.iterations = fit.iterations;
    est.converged = fit.converged;
    if (!fit.converged) est.warnings.emplace_back("contrast_not_converged");

    const double log_pos = std::log(est.sigma0_sq_hat);
    const double margin_s = 0.01 * (log_hi - log_lo);
    const double margin_e = 0.01 * (box.eta_max - box.eta_min);
    if (log_pos - log_lo < margin_s || log_hi - log_pos < margin_s ||
        est.eta_hat - box.eta_min < margin_e || box.eta_max - est.eta_hat < margin_e) {
        est.warnings.emplace_back("contrast_boundary");
    }
    return est;
}

}  // namespace spde
