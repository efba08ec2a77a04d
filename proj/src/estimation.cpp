#include "spde/estimation.hpp"

#include <cmath>

#include "spde/errors.hpp"
#include "spde/kernels.hpp"

namespace spde {

ObservationPlan observation_plan(long N, long M, double T, const EstimationSettings& settings) {
    const ThinnedSpatialGrid space(M, settings.delta, settings.m);
    const ThinnedTimeGrid time(N, T, settings.N2);
    return {space.sites(), time.fine_indices()};
}

EstimationResult estimate(const FieldObservations& obs, const EstimationSettings& settings) {
    if (!(settings.epsilon > 0.0)) throw DomainError("estimation requires epsilon > 0");
    const ThinnedSpatialGrid space(obs.M, settings.delta, settings.m);
    const ThinnedTimeGrid time(obs.N, obs.T, settings.N2);

    EstimationResult out;
    out.realized.epsilon = settings.epsilon;
    out.realized.sites = space.sites();
    out.realized.z.resize(space.sites().size());
    for (std::size_t j = 0; j < space.sites().size(); ++j) {
        const double y = space.sites()[j];
        std::size_t column = obs.sites.size();
        for (std::size_t c = 0; c < obs.sites.size(); ++c) {
            if (std::abs(obs.sites[c] - y) <= 1e-12) {
                column = c;
                break;
            }
        }
        if (column == obs.sites.size()) {
            throw DomainError("observations lack the site y = " + std::to_string(y));
        }
        out.realized.z[j] = realized_variation(obs.site_column(column), obs.N, obs.T);
    }

    out.contrast = minimize_contrast(out.realized, settings.box);
    out.theta1_hat = out.contrast.theta1_hat;
    out.theta2_hat = out.contrast.theta2_hat;
    out.warnings = out.contrast.warnings;

    out.series.k = 1;
    out.series.eta_hat = out.contrast.eta_hat;
    out.series.values.resize(static_cast<std::size_t>(time.N2() + 1));
    const auto weights = approx_coordinate_weights(out.series.eta_hat, 1, obs.M);
    const auto& kern = kernels::active();
    for (long i = 0; i <= time.N2(); ++i) {
        const long fine = time.fine_index(i);
        std::size_t slot = obs.row_time_index.size();
        for (std::size_t r = 0; r < obs.row_time_index.size(); ++r) {
            if (obs.row_time_index[r] == fine) {
                slot = r;
                break;
            }
        }
        if (slot == obs.row_time_index.size()) {
            throw DomainError("observations lack the full row at time index " + std::to_string(fine));
        }
        const auto row = obs.row(slot);
        out.series.values[i] = kern.dot(row.data(), weights.data(), row.size());
    }

    out.delta_bar = time.delta_bar();
    out.lambda = maximize_loglik(out.series.values, settings.epsilon, out.delta_bar,
                                 settings.lambda_search);
    out.warnings.insert(out.warnings.end(), out.lambda.warnings.begin(), out.lambda.warnings.end());
    out.lambda1_hat = out.lambda.lambda_hat;
    out.theta0_hat = theta0_hat(out.lambda1_hat, out.theta1_hat, out.theta2_hat);
    return out;
}

}  // namespace spde
