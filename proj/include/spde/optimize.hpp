#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spde {

struct NelderMeadOptions {
    double f_tolerance = 1e-10;  // spread of simplex values
    double x_tolerance = 1e-10;  // max-norm spread of simplex vertices
    int max_evaluations = 10000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // best value after each iteration
};

/// Derivative-free simplex minimization (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). The initial simplex is x0 plus one step
/// along each coordinate. Infinite objective values act as a barrier.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options = {});

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// Brent's golden-section / parabolic-interpolation minimizer on [lo, hi];
/// stops when the bracket around the incumbent is within abs_tolerance.
ScalarOptimum brent_minimize(const std::function<double(double)>& objective, double lo, double hi,
                             double abs_tolerance = 1e-8, int max_iterations = 500);

}  // namespace spde
