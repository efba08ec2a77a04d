#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spde/asymptotics.hpp"
#include "spde/config.hpp"
#include "spde/estimation.hpp"

namespace spde {

struct NormalityDiagnostics {
    long n = 0;
    double mean = 0.0;
    double sd = 0.0;
    bool sd_defined = false;
    double reference_variance = 0.0;
    double ks_statistic = 0.0;
    double ks_critical_5pct = 0.0;  // 1.358 / sqrt(n)
    bool degenerate = false;
    std::vector<double> sorted;      // ECDF support
    std::vector<double> ecdf;        // i / n
    std::vector<double> normal_cdf;  // reference CDF at the same abscissae
    std::vector<double> qq_theoretical;
    std::vector<double> qq_empirical;
    std::vector<double> hist_edges;   // bins + 1 edges
    std::vector<long> hist_counts;
    std::vector<double> hist_density;  // N(0, reference_variance) at bin centres
};

/// KS distance of the sample from N(0, reference_variance), ECDF, Q-Q pairs at
/// (i - 0.5) / n and a histogram over +-4 reference sd.
NormalityDiagnostics normality_diagnostics(std::span<const double> sample, double reference_variance,
                                           int bins = 30);

/// sup |F_n - Phi(. / sqrt(v))|.
double ks_statistic(std::span<const double> sample, double reference_variance);

struct ReplicateRecord {
    long rep = 0;
    double theta1_hat = 0.0;
    double theta2_hat = 0.0;
    double lambda1_hat = 0.0;
    double theta0_hat = 0.0;
    Standardized z;
    double contrast_value = 0.0;
    double loglik_value = 0.0;
    double wall_time_seconds = 0.0;  // never written to output files
    std::vector<std::string> flags;
    bool failed = false;
};

/// Everything a replicate needs that does not depend on the noise.
struct ExperimentContext {
    ExperimentConfig config;
    std::vector<double> x0;  // x_k(0), k = 1..K, with the override applied to k = 1
    double x1_0_projected = 0.0;
    double x1_0 = 0.0;
    ObservationPlan plan;
    std::optional<AsymptoticCovariance> covariance;
    std::vector<std::string> warnings;
};

ExperimentContext make_context(const ExperimentConfig& config);

/// Simulate and estimate replicate `rep`. Failures are recorded as flags.
ReplicateRecord run_replicate(const ExperimentContext& ctx, long rep);

struct SummaryStats {
    std::string parameter;
    double truth = 0.0;
    double mean = 0.0;
    double sd = 0.0;
    bool sd_defined = false;
    long failures = 0;
    long n = 0;
};

struct ExperimentResult {
    std::vector<ReplicateRecord> records;  // ordered by rep
    std::vector<SummaryStats> summary;     // theta1, theta2, theta0
    std::vector<NormalityDiagnostics> normality;  // z1, z2, z3; empty when no covariance
    nlohmann::ordered_json summary_json;
};

using ProgressCallback = std::function<void(long done, long total)>;

/// Runs all replicates on `threads` workers. Results do not depend on the
/// thread count.
ExperimentResult run_experiment(const ExperimentContext& ctx, int threads = 1,
                                const ProgressCallback& progress = {});

std::vector<SummaryStats> summarize(const std::vector<ReplicateRecord>& records, const ThetaParams& truth);

/// replicates.csv, summary.json and ecdf_/qq_/hist_ files per parameter.
void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

std::string replicates_csv(const std::vector<ReplicateRecord>& records);

}  // namespace spde
