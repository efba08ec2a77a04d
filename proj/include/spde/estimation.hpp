#pragma once

#include <string>
#include <vector>

#include "spde/adaptive.hpp"
#include "spde/contrast.hpp"
#include "spde/simulator.hpp"

namespace spde {

struct EstimationSettings {
    double epsilon = 0.1;
    double delta = 0.05;
    long m = 63;
    long N2 = 200;
    ContrastSearchBox box;
    LambdaSearch lambda_search;
};

/// Slices required by the estimators for a given grid and thinning.
ObservationPlan observation_plan(long N, long M, double T, const EstimationSettings& settings);

struct EstimationResult {
    double theta1_hat = 0.0;
    double theta2_hat = 0.0;
    double lambda1_hat = 0.0;
    double theta0_hat = 0.0;
    RealizedVariations realized;
    ContrastEstimate contrast;
    ApproxCoordinateSeries series;
    LambdaEstimate lambda;
    double delta_bar = 0.0;
    std::vector<std::string> warnings;
};

/// Minimum-contrast stage on the site columns, then the quasi-likelihood
/// stage on the approximate first coordinate built from the full rows with
/// the plug-in eta_hat. Throws DomainError when the observations do not
/// carry the slices the settings ask for.
EstimationResult estimate(const FieldObservations& obs, const EstimationSettings& settings);

}  // namespace spde
