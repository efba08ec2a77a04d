#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spde/model.hpp"

namespace spde {

/// Space-time grid t_i = i T / N (i = 0..N), y_j = j / M (j = 1..M), with K
/// retained spectral modes.
struct SimGrid {
    long N = 1;
    long M = 1;
    double T = 1.0;
    long K = 1;

    void validate() const;
    double dt() const noexcept { return T / static_cast<double>(N); }
    double time(long i) const noexcept { return static_cast<double>(i) * dt(); }
};

/// OU coordinate trajectories, values(k, i) = x_{k+1}(t_i), row-major K x (N+1).
struct CoordinatePaths {
    long K = 0;
    long steps = 0;  // N
    std::vector<double> values;
    std::vector<double> lambda;
    std::vector<double> x0;

    double at(long k_index, long i) const noexcept {
        return values[static_cast<std::size_t>(k_index) * static_cast<std::size_t>(steps + 1) +
                      static_cast<std::size_t>(i)];
    }
    /// Coordinate vector (x_1..x_K) at time index i.
    std::vector<double> column(long i) const;
};

/// The two slices of X_{t_i}(y_j) the estimators read.
///
/// site_values is site-major: site_values[j * (N+1) + i] = X_{t_i}(sites[j]),
/// i = 0..N, where i = 0 is the truncated initial field. row_values is
/// row-major: row_values[r * M + (j-1)] = X_{t(row_time_index[r])}(j / M).
struct FieldObservations {
    long N = 0;
    long M = 0;
    double T = 1.0;
    std::vector<double> sites;
    std::vector<double> site_values;
    std::vector<long> row_time_index;
    std::vector<double> row_values;

    std::span<const double> site_column(std::size_t j) const {
        return {site_values.data() + j * static_cast<std::size_t>(N + 1),
                static_cast<std::size_t>(N + 1)};
    }
    std::span<const double> row(std::size_t r) const {
        return {row_values.data() + r * static_cast<std::size_t>(M), static_cast<std::size_t>(M)};
    }
    bool operator==(const FieldObservations&) const = default;
};

/// Variance factor v(lambda, dt) = (1 - e^{-2 lambda dt}) / (2 lambda); v(0, dt) = dt.
double ou_variance(double lambda, double dt);

/// One exact OU transition x_prev -> e^{-lambda dt} x_prev + eps sqrt(v) z.
double ou_step(double x_prev, double lambda, double epsilon, double dt, double z);

/// Per-mode decay and noise scale for one step of size dt.
struct OuTransition {
    std::vector<double> decay;
    std::vector<double> noise_scale;
};
OuTransition ou_transition(std::span<const double> lambda, double epsilon, double dt);

struct RngAddress {
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;
};

inline constexpr std::size_t kDefaultMemoryCapBytes = std::size_t{2} << 30;

/// Full K x (N+1) coordinate matrix. Mode k draws from its own substream.
/// Epsilon may be zero (noiseless decay); negative lambda is allowed.
CoordinatePaths simulate_coordinates(const ThetaParams& theta, double epsilon,
                                     const SimGrid& grid, std::span<const double> x0,
                                     RngAddress rng,
                                     std::size_t memory_cap_bytes = kDefaultMemoryCapBytes);

/// Naive truncated expansion sum_k x_k e_k(y) at each site.
std::vector<double> synthesize_field_at(std::span<const double> coords, double eta,
                                        std::span<const double> sites);
std::vector<double> synthesize_field_at(const CoordinatePaths& paths, double eta, long time_index,
                                        std::span<const double> sites);

/// Synthesizes full rows X(j/M), j = 1..M, through a type-I discrete sine
/// transform: modes are folded onto 1..M-1 by the 2M-periodicity of
/// sin(pi k j / M) and transformed in O(K + M log M).
class RowSynthesizer {
public:
    RowSynthesizer(long M, double eta);
    ~RowSynthesizer();
    RowSynthesizer(RowSynthesizer&&) noexcept;
    RowSynthesizer& operator=(RowSynthesizer&&) noexcept;

    long M() const noexcept { return M_; }

    /// Writes the M row values into out.
    void synthesize(std::span<const double> coords, std::span<double> out);
    std::vector<double> synthesize(std::span<const double> coords);

private:
    struct Plan;
    long M_;
    std::vector<double> envelope_;  // sqrt(2)/2 * e^{-eta y_j / 2}, j = 1..M-1
    std::vector<double> folded_;
    std::vector<double> transformed_;
    std::unique_ptr<Plan> plan_;
};

std::vector<double> synthesize_row_fast(const CoordinatePaths& paths, double eta,
                                        long time_index, long M);

/// Which slices to keep while simulating.
struct ObservationPlan {
    std::vector<double> sites;          // thinned spatial sites in (0, 1)
    std::vector<long> row_time_index;   // time indices of the full rows
};

/// Streams the OU recursion over time with O(K + M) state and materializes
/// only the requested slices. Uses the same noise substreams as
/// simulate_coordinates, so the slices agree with synthesizing from the full
/// path matrix.
FieldObservations simulate_observations(const ThetaParams& theta, double epsilon,
                                        const SimGrid& grid, std::span<const double> x0,
                                        const ObservationPlan& plan, RngAddress rng);

/// Same slices extracted from a materialized path matrix (naive synthesis).
FieldObservations observations_from_paths(const CoordinatePaths& paths, double eta,
                                          const SimGrid& grid, const ObservationPlan& plan);

/// Stationary standard deviation eps / sqrt(2 lambda_K) of the last retained
/// mode; NaN when lambda_K <= 0.
double truncation_diagnostic(const ThetaParams& theta, double epsilon, long K);

}  // namespace spde
