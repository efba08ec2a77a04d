#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spde/config.hpp"
#include "spde/errors.hpp"
#include "spde/experiment.hpp"
#include "spde/field_io.hpp"
#include "spde/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEstimator = 3;
constexpr int kExitIo = 4;

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::string input_dir;
    int threads = 0;
    long rep = 0;
    bool verbose = false;
};

int report(const char* kind, const std::string& message, int code) {
    std::cerr << "error: " << ordered_json{{"kind", kind}, {"message", message}, {"exit_code", code}}.dump()
              << '\n';
    return code;
}

spde::ExperimentConfig resolve_config(const Options& opt) {
    json doc = json::object();
    if (!opt.config_path.empty()) {
        try {
            doc = json::parse(spde::read_text_file(opt.config_path));
        } catch (const json::parse_error& e) {
            throw spde::ConfigError("cannot parse " + opt.config_path + ": " + e.what());
        }
    }
    for (const auto& assignment : opt.overrides) {
        const json previous = spde::apply_override(doc, assignment);
        std::cerr << "override " << assignment << " (was " << previous.dump() << ")\n";
    }
    if (!opt.output_dir.empty()) doc["output_dir"] = opt.output_dir;
    return spde::config_from_json(doc);
}

fs::path prepare_output(const spde::ExperimentConfig& config) {
    const fs::path dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw spde::IoError("cannot create " + dir.string() + ": " + ec.message());
    spde::write_text_file(dir / "effective_config.json", spde::config_to_json(config).dump(2) + "\n");
    return dir;
}

int run_simulate(const Options& opt) {
    const auto config = resolve_config(opt);
    const auto dir = prepare_output(config);
    const auto ctx = spde::make_context(config);
    const auto obs = spde::simulate_observations(config.theta_star, config.epsilon, config.grid(), ctx.x0,
                                                 ctx.plan, {config.seed, static_cast<std::uint64_t>(opt.rep)});
    spde::write_field_observations(obs, dir);
    ordered_json info{{"rep", opt.rep},
                      {"seed", config.seed},
                      {"x1_0_used", ctx.x1_0},
                      {"truncation_sd", spde::truncation_diagnostic(config.theta_star, config.epsilon, config.K)},
                      {"warnings", ctx.warnings}};
    spde::write_text_file(dir / "simulation.json", info.dump(2) + "\n");
    if (opt.verbose) std::cerr << "wrote " << (dir / spde::kSiteSliceFile) << " and " << (dir / spde::kRowSliceFile) << '\n';
    return 0;
}

int run_estimate(const Options& opt) {
    const auto config = resolve_config(opt);
    const auto dir = prepare_output(config);
    spde::FieldObservations obs;
    ordered_json j;
    if (!opt.input_dir.empty()) {
        obs = spde::read_field_observations(opt.input_dir);
        j["source"] = opt.input_dir;
    } else {
        const auto ctx = spde::make_context(config);
        obs = spde::simulate_observations(config.theta_star, config.epsilon, config.grid(), ctx.x0, ctx.plan,
                                          {config.seed, static_cast<std::uint64_t>(opt.rep)});
        j["source"] = "simulated";
        j["rep"] = opt.rep;
    }
    const auto est = spde::estimate(obs, config.estimation_settings());
    const auto z = spde::standardize(est.theta0_hat, est.theta1_hat, est.theta2_hat, config.theta_star, obs.N,
                                     config.m, config.epsilon);
    j["theta1_hat"] = est.theta1_hat;
    j["theta2_hat"] = est.theta2_hat;
    j["lambda1_hat"] = est.lambda1_hat;
    j["theta0_hat"] = est.theta0_hat;
    j["sigma0_sq_hat"] = est.contrast.sigma0_sq_hat;
    j["eta_hat"] = est.contrast.eta_hat;
    j["standardized"] = {{"z1", z.theta1}, {"z2", z.theta2}, {"z3", z.theta0}};
    j["contrast"] = {{"value", est.contrast.contrast_value},
                     {"grid_best", est.contrast.grid_best_value},
                     {"evaluations", est.contrast.evaluations},
                     {"iterations", est.contrast.iterations},
                     {"converged", est.contrast.converged}};
    j["likelihood"] = {{"loglik", est.lambda.loglik},
                       {"evaluations", est.lambda.evaluations},
                       {"delta_bar", est.delta_bar}};
    j["warnings"] = est.warnings;
    spde::write_text_file(dir / "estimate.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return 0;
}

int run_experiment(const Options& opt) {
    const auto config = resolve_config(opt);
    const auto dir = prepare_output(config);
    const auto ctx = spde::make_context(config);
    int threads = opt.threads;
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (opt.verbose) {
        std::cerr << "kernels: " << spde::kernels::active().name << ", threads: " << threads << '\n';
        for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
    }
    spde::ProgressCallback progress;
    if (opt.verbose) {
        progress = [](long done, long total) { std::cerr << "replicate " << done << '/' << total << '\n'; };
    }
    const auto result = spde::run_experiment(ctx, threads, progress);
    spde::write_experiment_outputs(result, dir);
    for (const auto& s : result.summary) {
        std::cout << s.parameter << ": mean " << s.mean << ", sd " << s.sd << (s.sd_defined ? "" : " (undefined)")
                  << ", n " << s.n << ", failures " << s.failures << '\n';
    }
    return 0;
}

int run_asymptotics(const Options& opt) {
    const auto config = resolve_config(opt);
    const auto dir = prepare_output(config);
    double x1_0 = 0.0;
    if (config.x1_0_override) {
        x1_0 = *config.x1_0_override;
    } else {
        x1_0 = spde::initial_coefficients(config.xi, config.theta_star, 1).front();
    }
    const auto cov =
        spde::covariance_matrices(config.theta_star, config.delta, x1_0, config.T, config.fisher_use_horizon);
    auto j = spde::to_json(cov, config.theta_star, x1_0);
    j["gamma_terms"] = spde::gamma_const().terms;
    j["rate_diagnostics"] = spde::rate_diagnostics(config);
    spde::write_text_file(dir / "asymptotics.json", j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and adaptive drift estimation for a parabolic SPDE with small noise"};
    app.require_subcommand(1);
    Options opt;
    const std::string keys = spde::config_reference();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", opt.config_path, "JSON config file");
        sub->add_option("-s,--set", opt.overrides, "Override a config key, e.g. --set theta_star.theta0=3.1")
            ->take_all();
        sub->add_option("-o,--output-dir", opt.output_dir, "Output directory (overrides output_dir)");
        sub->add_flag("-v,--verbose", opt.verbose, "Progress and warnings on stderr");
        sub->footer(keys);
    };

    auto* simulate = app.add_subcommand("simulate", "Simulate one replicate and dump the observed slices");
    add_common(simulate);
    simulate->add_option("--rep", opt.rep, "Replicate index (noise substream)")->check(CLI::NonNegativeNumber);

    auto* estimate = app.add_subcommand("estimate", "Estimate (theta0, theta1, theta2) from one data set");
    add_common(estimate);
    estimate->add_option("-i,--input-dir", opt.input_dir, "Directory with field_sites.csv and field_rows.csv");
    estimate->add_option("--rep", opt.rep, "Replicate index when simulating in-line")
        ->check(CLI::NonNegativeNumber);

    auto* experiment = app.add_subcommand("experiment", "Monte-Carlo study of the estimators");
    add_common(experiment);
    experiment->add_option("-j,--threads", opt.threads, "Worker threads (default: available parallelism)")
        ->check(CLI::NonNegativeNumber);

    auto* asymptotics = app.add_subcommand("asymptotics", "Limit covariances and Fisher information");
    add_common(asymptotics);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("config", e.what(), kExitConfig);
    }

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (estimate->parsed()) return run_estimate(opt);
        if (experiment->parsed()) return run_experiment(opt);
        return run_asymptotics(opt);
    } catch (const spde::ConfigError& e) {
        return report("config", e.what(), kExitConfig);
    } catch (const spde::IoError& e) {
        return report("io", e.what(), kExitIo);
    } catch (const spde::OptimizerError& e) {
        return report("optimizer", e.what(), kExitEstimator);
    } catch (const spde::NumericalError& e) {
        return report("numerical", e.what(), kExitEstimator);
    } catch (const spde::DomainError& e) {
        return report("domain", e.what(), kExitEstimator);
    } catch (const spde::ResourceError& e) {
        return report("resource", e.what(), kExitEstimator);
    } catch (const std::exception& e) {
        return report("internal", e.what(), kExitEstimator);
    }
}
