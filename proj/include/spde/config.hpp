#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spde/estimation.hpp"
#include "spde/model.hpp"

namespace spde {

/// One Monte-Carlo study. Defaults are the desk-scale profile of the
/// (theta0, theta1, theta2) = (0, 1, 0.2) example.
struct ExperimentConfig {
    ThetaParams theta_star{0.0, 1.0, 0.2};
    double epsilon = 0.1;
    long N = 2000;
    long M = 2000;
    long K = 20000;
    long N2 = 200;
    long m = 63;
    double T = 1.0;
    double delta = 0.05;
    InitialCondition xi = ParabolaInitial{4.2};
    std::optional<double> x1_0_override = 3.0;
    long replicates = 100;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    ContrastSearchBox contrast_box;
    LambdaSearch lambda_search;
    bool fisher_use_horizon = true;

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    SimGrid grid() const { return {N, M, T, K}; }
    EstimationSettings estimation_settings() const;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

/// Strict parse: unknown keys and mistyped values raise ConfigError. Missing
/// keys keep their defaults. The result is validated.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::string& path);

/// Applies "dotted.key=value" to a JSON document. The value is read as JSON
/// when it parses, otherwise as a string. Returns the previous value (null if
/// absent) for provenance logging.
nlohmann::json apply_override(nlohmann::json& doc, const std::string& assignment);

/// Human-readable list of every key, its type and default.
std::string config_reference();

/// Rate-condition ratios of the limit theorem, reported without pass/fail.
nlohmann::ordered_json rate_diagnostics(const ExperimentConfig& config);
std::vector<std::string> config_warnings(const ExperimentConfig& config);

}  // namespace spde
