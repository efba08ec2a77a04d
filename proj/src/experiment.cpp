#include "spde/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "spde/errors.hpp"
#include "spde/field_io.hpp"
#include "spde/kernels.hpp"
#include "spde/rng.hpp"

namespace spde {

namespace {

void add_unique(std::vector<std::string>& list, const std::string& item) {
    for (const auto& s : list) {
        if (s == item) return;
    }
    list.push_back(item);
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

std::string csv_number(double v) { return std::isfinite(v) ? format_double(v) : "nan"; }

nlohmann::ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json normality_json(const NormalityDiagnostics& d) {
    return {{"n", d.n},
            {"reference_variance", d.reference_variance},
            {"mean", finite_or_null(d.mean)},
            {"sd", d.sd_defined ? finite_or_null(d.sd) : nlohmann::ordered_json(0.0)},
            {"sd_defined", d.sd_defined},
            {"ks_statistic", d.ks_statistic},
            {"ks_critical_5pct", d.ks_critical_5pct},
            {"ks_below_critical", d.ks_statistic < d.ks_critical_5pct},
            {"degenerate", d.degenerate}};
}

}  // namespace

ExperimentContext make_context(const ExperimentConfig& config) {
    config.validate();
    ExperimentContext ctx;
    ctx.config = config;
    ctx.x0 = initial_coefficients(config.xi, config.theta_star, config.K);
    ctx.x1_0_projected = ctx.x0.front();
    ctx.x1_0 = ctx.x1_0_projected;
    if (config.x1_0_override) {
        ctx.x1_0 = *config.x1_0_override;
        ctx.x0.front() = ctx.x1_0;
        const double scale = std::max(std::abs(ctx.x1_0), std::abs(ctx.x1_0_projected));
        if (std::abs(ctx.x1_0 - ctx.x1_0_projected) > 0.05 * scale) {
            ctx.warnings.emplace_back("x1_0_override_inconsistent");
        }
    }
    if (std::abs(ctx.x1_0) < 1e-12) ctx.warnings.emplace_back("x1_0_degenerate");
    for (const auto& w : config_warnings(config)) ctx.warnings.push_back(w);
    ctx.plan = observation_plan(config.N, config.M, config.T, config.estimation_settings());
    try {
        ctx.covariance = covariance_matrices(config.theta_star, config.delta, ctx.x1_0, config.T,
                                             config.fisher_use_horizon);
        for (const auto& w : ctx.covariance->warnings) add_unique(ctx.warnings, w);
    } catch (const std::exception& e) {
        ctx.warnings.emplace_back("asymptotics_unavailable");
    }
    return ctx;
}

ReplicateRecord run_replicate(const ExperimentContext& ctx, long rep) {
    const auto start = std::chrono::steady_clock::now();
    const auto& cfg = ctx.config;
    ReplicateRecord rec;
    rec.rep = rep;
    const double nan = std::nan("");
    rec.theta1_hat = rec.theta2_hat = rec.lambda1_hat = rec.theta0_hat = nan;
    rec.z = {nan, nan, nan};
    rec.contrast_value = rec.loglik_value = nan;

    if (!(cfg.epsilon > 0.0)) {
        rec.failed = true;
        rec.flags.emplace_back("epsilon_zero");
    } else {
        const auto obs = simulate_observations(cfg.theta_star, cfg.epsilon, cfg.grid(), ctx.x0, ctx.plan,
                                               {cfg.seed, static_cast<std::uint64_t>(rep)});
        try {
            const auto est = estimate(obs, cfg.estimation_settings());
            rec.theta1_hat = est.theta1_hat;
            rec.theta2_hat = est.theta2_hat;
            rec.lambda1_hat = est.lambda1_hat;
            rec.theta0_hat = est.theta0_hat;
            rec.contrast_value = est.contrast.contrast_value;
            rec.loglik_value = est.lambda.loglik;
            rec.flags = est.warnings;
            rec.z = standardize(est.theta0_hat, est.theta1_hat, est.theta2_hat, cfg.theta_star, cfg.N,
                                cfg.m, cfg.epsilon);
            if (!std::isfinite(rec.theta0_hat) || !std::isfinite(rec.theta1_hat) ||
                !std::isfinite(rec.theta2_hat)) {
                rec.failed = true;
                rec.flags.emplace_back("non_finite_estimate");
            }
        } catch (const OptimizerError&) {
            rec.failed = true;
            rec.flags.emplace_back("optimizer_failure");
        } catch (const NumericalError&) {
            rec.failed = true;
            rec.flags.emplace_back("numerical_failure");
        } catch (const DomainError&) {
            rec.failed = true;
            rec.flags.emplace_back("domain_failure");
        }
    }
    rec.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<SummaryStats> summarize(const std::vector<ReplicateRecord>& records, const ThetaParams& truth) {
    std::vector<SummaryStats> out(3);
    out[0].parameter = "theta1";
    out[0].truth = truth.theta1();
    out[1].parameter = "theta2";
    out[1].truth = truth.theta2();
    out[2].parameter = "theta0";
    out[2].truth = truth.theta0();
    for (int p = 0; p < 3; ++p) {
        std::vector<double> v;
        for (const auto& r : records) {
            if (r.failed) {
                ++out[p].failures;
                continue;
            }
            v.push_back(p == 0 ? r.theta1_hat : p == 1 ? r.theta2_hat : r.theta0_hat);
        }
        out[p].n = static_cast<long>(v.size());
        if (v.empty()) {
            out[p].mean = std::nan("");
            continue;
        }
        double sum = 0.0;
        for (double x : v) sum += x;
        out[p].mean = sum / static_cast<double>(v.size());
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - out[p].mean) * (x - out[p].mean);
            out[p].sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
            out[p].sd_defined = true;
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentContext& ctx, int threads, const ProgressCallback& progress) {
    const long total = ctx.config.replicates;
    ExperimentResult result;
    result.records.resize(static_cast<std::size_t>(total));
    const int workers = static_cast<int>(std::clamp<long>(threads < 1 ? 1 : threads, 1, total));

    std::atomic<long> next{0};
    std::atomic<bool> abort{false};
    std::mutex mutex;
    long done = 0;
    std::exception_ptr error;
    auto work = [&] {
        while (!abort.load()) {
            const long rep = next.fetch_add(1);
            if (rep >= total) return;
            try {
                result.records[static_cast<std::size_t>(rep)] = run_replicate(ctx, rep);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!error) error = std::current_exception();
                abort = true;
                return;
            }
            std::lock_guard lock(mutex);
            ++done;
            if (progress) progress(done, total);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    const auto& cfg = ctx.config;
    result.summary = summarize(result.records, cfg.theta_star);

    nlohmann::ordered_json j;
    j["config"] = config_to_json(cfg);
    j["rng_stream_version"] = kRngStreamVersion;
    j["x1_0_projected"] = ctx.x1_0_projected;
    j["x1_0_used"] = ctx.x1_0;
    j["replicates"] = total;
    long failures = 0;
    for (const auto& r : result.records) failures += r.failed ? 1 : 0;
    j["successes"] = total - failures;
    j["failures"] = failures;
    auto& params = j["parameters"];
    for (const auto& s : result.summary) {
        params[s.parameter] = {{"truth", s.truth},
                               {"mean", finite_or_null(s.mean)},
                               {"sd", s.sd},
                               {"sd_defined", s.sd_defined},
                               {"count", s.n},
                               {"failures", s.failures}};
    }

    if (ctx.covariance && ctx.covariance->g_fisher > 0.0) {
        const auto& cov = *ctx.covariance;
        const double variances[3] = {cov.J(1, 1), cov.J(0, 0), 1.0 / cov.g_fisher};
        const char* names[3] = {"z1", "z2", "z3"};
        auto& norm = j["normality"];
        for (int c = 0; c < 3; ++c) {
            std::vector<double> sample;
            for (const auto& r : result.records) {
                if (r.failed) continue;
                sample.push_back(c == 0 ? r.z.theta1 : c == 1 ? r.z.theta2 : r.z.theta0);
            }
            result.normality.push_back(normality_diagnostics(sample, variances[c]));
            norm[names[c]] = normality_json(result.normality.back());
        }
        j["asymptotics"] = to_json(cov, cfg.theta_star, ctx.x1_0);
    } else {
        j["normality"] = nullptr;
        j["asymptotics"] = nullptr;
    }
    j["rate_diagnostics"] = rate_diagnostics(cfg);
    j["warnings"] = ctx.warnings;
    std::map<std::string, long> flag_counts;
    for (const auto& r : result.records) {
        for (const auto& f : r.flags) ++flag_counts[f];
    }
    j["flag_counts"] = flag_counts;
    result.summary_json = std::move(j);
    return result;
}

std::string replicates_csv(const std::vector<ReplicateRecord>& records) {
    std::ostringstream os;
    os << "rep,theta1_hat,theta2_hat,lambda1_hat,theta0_hat,z1,z2,z3,flags\n";
    for (const auto& r : records) {
        os << r.rep << ',' << csv_number(r.theta1_hat) << ',' << csv_number(r.theta2_hat) << ','
           << csv_number(r.lambda1_hat) << ',' << csv_number(r.theta0_hat) << ',' << csv_number(r.z.theta1)
           << ',' << csv_number(r.z.theta2) << ',' << csv_number(r.z.theta0) << ',' << join_flags(r.flags)
           << '\n';
    }
    return os.str();
}

void write_experiment_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    write_text_file(dir / "replicates.csv", replicates_csv(result.records));
    write_text_file(dir / "summary.json", result.summary_json.dump(2) + "\n");

    const char* names[3] = {"theta1", "theta2", "theta0"};
    for (std::size_t c = 0; c < result.normality.size(); ++c) {
        const auto& d = result.normality[c];
        std::ostringstream ecdf, qq, hist;
        ecdf << "z,ecdf,normal_cdf\n";
        for (std::size_t i = 0; i < d.sorted.size(); ++i) {
            ecdf << format_double(d.sorted[i]) << ',' << format_double(d.ecdf[i]) << ','
                 << format_double(d.normal_cdf[i]) << '\n';
        }
        qq << "normal_quantile,sample_quantile\n";
        for (std::size_t i = 0; i < d.sorted.size(); ++i) {
            qq << format_double(d.qq_theoretical[i]) << ',' << format_double(d.qq_empirical[i]) << '\n';
        }
        hist << "bin_lo,bin_hi,count,density,normal_density\n";
        const double n = static_cast<double>(std::max<long>(d.n, 1));
        for (std::size_t b = 0; b < d.hist_counts.size(); ++b) {
            const double width = d.hist_edges[b + 1] - d.hist_edges[b];
            hist << format_double(d.hist_edges[b]) << ',' << format_double(d.hist_edges[b + 1]) << ','
                 << d.hist_counts[b] << ',' << format_double(static_cast<double>(d.hist_counts[b]) / (n * width))
                 << ',' << format_double(d.hist_density[b]) << '\n';
        }
        write_text_file(dir / ("ecdf_" + std::string(names[c]) + ".csv"), ecdf.str());
        write_text_file(dir / ("qq_" + std::string(names[c]) + ".csv"), qq.str());
        write_text_file(dir / ("hist_" + std::string(names[c]) + ".csv"), hist.str());
    }
}

}  // namespace spde
