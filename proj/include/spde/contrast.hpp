#pragma once

#include <span>
#include <string>
#include <vector>

#include "spde/model.hpp"

namespace spde {

/// Spatial sites y_j = delta + floor(Mbar / m) (j - 1) / M, j = 1..m, with
/// Mbar = 1 + floor((1 - 2 delta) M). All sites lie in [delta, 1 - delta].
class ThinnedSpatialGrid {
public:
    ThinnedSpatialGrid(long M, double delta, long m);

    long M() const noexcept { return M_; }
    double delta() const noexcept { return delta_; }
    long m() const noexcept { return m_; }
    long m_bar() const noexcept { return m_bar_; }
    long stride() const noexcept { return stride_; }
    const std::vector<double>& sites() const noexcept { return sites_; }

private:
    long M_;
    double delta_;
    long m_;
    long m_bar_;
    long stride_;
    std::vector<double> sites_;
};

struct RealizedVariations {
    std::vector<double> z;      // Z_j, j = 1..m
    std::vector<double> sites;  // matching y_j
    double epsilon = 1.0;
};

/// Z = (1 / (N sqrt(T/N))) sum_{i=1}^N (X_{t_i} - X_{t_{i-1}})^2 for a column
/// holding X_{t_0}..X_{t_N}.
double realized_variation(std::span<const double> column, long N, double T);

/// Mean squared deviation of Z_j / eps^2 from (sigma0_sq / sqrt(pi)) e^{-eta y_j}.
double contrast(double sigma0_sq, double eta, const RealizedVariations& rv);

/// Target curve (sigma0_sq / sqrt(pi)) e^{-eta y} of Z / eps^2.
double contrast_target(double sigma0_sq, double eta, double y);

struct ContrastSearchBox {
    double sigma0_sq_min = 1e-2;
    double sigma0_sq_max = 1e2;
    double eta_min = -20.0;
    double eta_max = 20.0;
    int grid_points = 64;  // per axis; sigma0_sq is log-spaced, eta linear

    void validate() const;
};

struct ContrastEstimate {
    double sigma0_sq_hat = 0.0;
    double eta_hat = 0.0;
    double theta1_hat = 0.0;
    double theta2_hat = 0.0;
    double contrast_value = 0.0;
    double grid_best_value = 0.0;
    int evaluations = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // grid best, then the simplex best per iteration
    std::vector<std::string> warnings;
};

/// Coarse scan of the box followed by a Nelder-Mead refinement in
/// (sigma0_sq, eta); maps the argmin to (theta1, theta2).
ContrastEstimate minimize_contrast(const RealizedVariations& rv, const ContrastSearchBox& box = {});

}  // namespace spde
