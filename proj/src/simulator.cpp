#include "spde/simulator.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "spde/errors.hpp"
#include "spde/kernels.hpp"
#include "spde/rng.hpp"

namespace spde {

namespace {

// FFTW's planner is not re-entrant; execution of distinct plans is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Grid index j in 1..M-1 when y == j / M, otherwise -1.
long grid_site_index(double y, long M) {
    const double scaled = y * static_cast<double>(M);
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > 1e-9 * std::max(1.0, scaled)) return -1;
    const auto j = static_cast<long>(nearest);
    return (j >= 1 && j <= M - 1) ? j : -1;
}

void check_plan(const ObservationPlan& plan, const SimGrid& grid) {
    for (double y : plan.sites) {
        if (!(y > 0.0 && y < 1.0)) throw DomainError("observation sites must lie in (0, 1)");
    }
    for (long i : plan.row_time_index) {
        if (i < 0 || i > grid.N) throw DomainError("row time index outside 0..N");
    }
}

}  // namespace

void SimGrid::validate() const {
    if (N < 1 || M < 1 || K < 1) throw ConfigError("N, M and K must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T must be finite and > 0");
}

std::vector<double> CoordinatePaths::column(long i) const {
    std::vector<double> out(static_cast<std::size_t>(K));
    for (long k = 0; k < K; ++k) out[k] = at(k, i);
    return out;
}

double ou_variance(double lambda, double dt) {
    const double x = lambda * dt;
    if (std::abs(x) < 1e-6) {
        return dt * (1.0 - x + (2.0 / 3.0) * x * x);
    }
    return -std::expm1(-2.0 * x) / (2.0 * lambda);
}

double ou_step(double x_prev, double lambda, double epsilon, double dt, double z) {
    const double decay = std::exp(-lambda * dt);
    const double scale = epsilon * std::sqrt(ou_variance(lambda, dt));
    return decay * x_prev + scale * z;
}

OuTransition ou_transition(std::span<const double> lambda, double epsilon, double dt) {
    OuTransition t;
    t.decay.resize(lambda.size());
    t.noise_scale.resize(lambda.size());
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        t.decay[k] = std::exp(-lambda[k] * dt);
        t.noise_scale[k] = epsilon * std::sqrt(ou_variance(lambda[k], dt));
    }
    return t;
}

namespace {

std::vector<double> mode_rates(const ThetaParams& theta, long K) {
    std::vector<double> lambda(static_cast<std::size_t>(K));
    for (long k = 1; k <= K; ++k) lambda[k - 1] = lambda_k(theta, k);
    return lambda;
}

void check_inputs(double epsilon, const SimGrid& grid, std::span<const double> x0) {
    grid.validate();
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be >= 0");
    if (static_cast<long>(x0.size()) != grid.K) {
        throw DomainError("initial coefficient vector must have K entries");
    }
    if (grid.N >= (1L << 32) - 1 || grid.K >= (1L << 32) - 1) {
        throw DomainError("N and K must fit the 32-bit noise counter");
    }
}

}  // namespace

CoordinatePaths simulate_coordinates(const ThetaParams& theta, double epsilon,
                                     const SimGrid& grid, std::span<const double> x0,
                                     RngAddress rng, std::size_t memory_cap_bytes) {
    check_inputs(epsilon, grid, x0);
    const auto cols = static_cast<std::size_t>(grid.N + 1);
    const auto rows = static_cast<std::size_t>(grid.K);
    if (rows * cols > memory_cap_bytes / sizeof(double)) {
        throw ResourceError("coordinate matrix of " + std::to_string(rows) + " x " +
                            std::to_string(cols) + " exceeds the memory cap");
    }
    CoordinatePaths paths;
    paths.K = grid.K;
    paths.steps = grid.N;
    paths.lambda = mode_rates(theta, grid.K);
    paths.x0.assign(x0.begin(), x0.end());
    paths.values.resize(rows * cols);

    const NoiseStreams noise(rng.seed, rng.replicate);
    const OuTransition step = ou_transition(paths.lambda, epsilon, grid.dt());
    for (std::size_t k = 0; k < rows; ++k) {
        double* row = paths.values.data() + k * cols;
        row[0] = x0[k];
        for (std::size_t i = 1; i < cols; ++i) {
            const double z = noise.normal(static_cast<std::uint32_t>(k + 1),
                                          static_cast<std::uint32_t>(i));
            row[i] = step.decay[k] * row[i - 1] + step.noise_scale[k] * z;
        }
    }
    return paths;
}

std::vector<double> synthesize_field_at(std::span<const double> coords, double eta,
                                        std::span<const double> sites) {
    std::vector<double> out(sites.size(), 0.0);
    for (std::size_t j = 0; j < sites.size(); ++j) {
        const double y = sites[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < coords.size(); ++k) {
            acc += coords[k] * std::sin(std::numbers::pi * static_cast<double>(k + 1) * y);
        }
        out[j] = std::numbers::sqrt2 * std::exp(-0.5 * eta * y) * acc;
    }
    return out;
}

std::vector<double> synthesize_field_at(const CoordinatePaths& paths, double eta, long time_index,
                                        std::span<const double> sites) {
    if (time_index < 0 || time_index > paths.steps) throw DomainError("time index outside 0..N");
    return synthesize_field_at(paths.column(time_index), eta, sites);
}

struct RowSynthesizer::Plan {
    fftw_plan handle = nullptr;
    ~Plan() {
        if (handle) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(handle);
        }
    }
};

RowSynthesizer::RowSynthesizer(long M, double eta) : M_(M) {
    if (M < 1) throw DomainError("M must be >= 1");
    const long interior = M - 1;
    envelope_.resize(static_cast<std::size_t>(interior));
    for (long j = 1; j <= interior; ++j) {
        const double y = static_cast<double>(j) / static_cast<double>(M);
        envelope_[j - 1] = 0.5 * std::numbers::sqrt2 * std::exp(-0.5 * eta * y);
    }
    folded_.assign(static_cast<std::size_t>(interior), 0.0);
    transformed_.assign(static_cast<std::size_t>(interior), 0.0);
    if (interior >= 2) {
        plan_ = std::make_unique<Plan>();
        std::lock_guard lock(fftw_planner_mutex());
        // ESTIMATE keeps the plan choice independent of timing, so results are
        // reproducible run to run.
        plan_->handle = fftw_plan_r2r_1d(static_cast<int>(interior), folded_.data(),
                                         transformed_.data(), FFTW_RODFT00,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan_->handle) throw NumericalError("FFTW failed to plan the sine transform");
    }
}

RowSynthesizer::~RowSynthesizer() = default;
RowSynthesizer::RowSynthesizer(RowSynthesizer&&) noexcept = default;
RowSynthesizer& RowSynthesizer::operator=(RowSynthesizer&&) noexcept = default;

void RowSynthesizer::synthesize(std::span<const double> coords, std::span<double> out) {
    if (static_cast<long>(out.size()) != M_) throw DomainError("row buffer must have M entries");
    const long interior = M_ - 1;
    out[M_ - 1] = 0.0;  // y = 1
    if (interior == 0) return;
    if (!plan_) {
        // Too small for a transform; sum directly.
        for (long j = 1; j <= interior; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < coords.size(); ++k) {
                acc += coords[k] * std::sin(std::numbers::pi * static_cast<double>(k + 1) *
                                            static_cast<double>(j) / static_cast<double>(M_));
            }
            out[j - 1] = 2.0 * envelope_[j - 1] * acc;
        }
        return;
    }

    const auto& kern = kernels::active();
    std::fill(folded_.begin(), folded_.end(), 0.0);
    const auto K = static_cast<long>(coords.size());
    const long period = 2 * M_;
    for (long base = 0; base < K; base += period) {
        // k = base + r, r = 1..M-1, adds to mode r.
        const long forward = std::min(interior, K - base);
        if (forward > 0) kern.accumulate(folded_.data(), coords.data() + base, forward);
        // k = base + M + s, s = 1..M-1, subtracts from mode M - s.
        const long reverse = std::min(interior, K - (base + M_));
        if (reverse > 0) {
            kern.subtract_reversed(folded_.data() + (interior - 1), coords.data() + base + M_,
                                   reverse);
        }
    }
    fftw_execute(plan_->handle);
    kern.multiply(out.data(), transformed_.data(), envelope_.data(), interior);
}

std::vector<double> RowSynthesizer::synthesize(std::span<const double> coords) {
    std::vector<double> out(static_cast<std::size_t>(M_));
    synthesize(coords, out);
    return out;
}

std::vector<double> synthesize_row_fast(const CoordinatePaths& paths, double eta,
                                        long time_index, long M) {
    if (time_index < 0 || time_index > paths.steps) throw DomainError("time index outside 0..N");
    RowSynthesizer synth(M, eta);
    return synth.synthesize(paths.column(time_index));
}

FieldObservations simulate_observations(const ThetaParams& theta, double epsilon,
                                        const SimGrid& grid, std::span<const double> x0,
                                        const ObservationPlan& plan, RngAddress rng) {
    check_inputs(epsilon, grid, x0);
    check_plan(plan, grid);
    const auto& kern = kernels::active();
    const double eta = theta.eta();
    const auto K = static_cast<std::size_t>(grid.K);
    const auto n_sites = plan.sites.size();
    const auto cols = static_cast<std::size_t>(grid.N + 1);

    FieldObservations obs;
    obs.N = grid.N;
    obs.M = grid.M;
    obs.T = grid.T;
    obs.sites = plan.sites;
    obs.row_time_index = plan.row_time_index;
    obs.site_values.assign(n_sites * cols, 0.0);
    obs.row_values.assign(plan.row_time_index.size() * static_cast<std::size_t>(grid.M), 0.0);

    // Sites on the j/M lattice are read off the transformed row; otherwise the
    // expansion is summed against a precomputed basis.
    std::vector<long> site_grid(n_sites);
    bool on_lattice = true;
    for (std::size_t j = 0; j < n_sites; ++j) {
        site_grid[j] = grid_site_index(plan.sites[j], grid.M);
        on_lattice = on_lattice && site_grid[j] > 0;
    }
    std::vector<double> basis;
    if (!on_lattice) {
        basis.resize(n_sites * K);
        for (std::size_t j = 0; j < n_sites; ++j) {
            for (std::size_t k = 0; k < K; ++k) {
                basis[j * K + k] = eigenfunction(eta, static_cast<long>(k + 1), plan.sites[j]);
            }
        }
    }

    // Time index -> slot in row_values (or -1).
    std::vector<long> row_slot(cols, -1);
    for (std::size_t r = 0; r < plan.row_time_index.size(); ++r) {
        row_slot[static_cast<std::size_t>(plan.row_time_index[r])] = static_cast<long>(r);
    }

    RowSynthesizer synth(grid.M, eta);
    std::vector<double> row(static_cast<std::size_t>(grid.M));
    std::vector<double> x(x0.begin(), x0.end());

    auto record = [&](std::size_t i) {
        const long slot = row_slot[i];
        const bool need_row = slot >= 0 || (on_lattice && n_sites > 0);
        if (need_row) synth.synthesize(x, row);
        if (slot >= 0) {
            std::copy(row.begin(), row.end(),
                      obs.row_values.begin() + slot * static_cast<long>(grid.M));
        }
        for (std::size_t j = 0; j < n_sites; ++j) {
            obs.site_values[j * cols + i] = on_lattice
                                                ? row[static_cast<std::size_t>(site_grid[j] - 1)]
                                                : kern.dot(basis.data() + j * K, x.data(), K);
        }
    };

    const std::vector<double> lambda = mode_rates(theta, grid.K);
    const OuTransition step = ou_transition(lambda, epsilon, grid.dt());
    const NoiseStreams noise(rng.seed, rng.replicate);
    std::vector<double> z_odd(K);
    std::vector<double> z_even(K);

    record(0);
    for (std::size_t i = 1; i < cols; ++i) {
        if (i % 2 == 1) {
            const auto pair = static_cast<std::uint32_t>((i - 1) / 2);
            for (std::size_t k = 0; k < K; ++k) {
                const auto [a, b] = noise.normal_pair(static_cast<std::uint32_t>(k + 1), pair);
                z_odd[k] = a;
                z_even[k] = b;
            }
        }
        kern.ou_advance(x.data(), step.decay.data(), step.noise_scale.data(),
                        (i % 2 == 1 ? z_odd : z_even).data(), K);
        record(i);
    }
    return obs;
}

FieldObservations observations_from_paths(const CoordinatePaths& paths, double eta,
                                          const SimGrid& grid, const ObservationPlan& plan) {
    check_plan(plan, grid);
    FieldObservations obs;
    obs.N = grid.N;
    obs.M = grid.M;
    obs.T = grid.T;
    obs.sites = plan.sites;
    obs.row_time_index = plan.row_time_index;
    const auto cols = static_cast<std::size_t>(grid.N + 1);
    obs.site_values.assign(plan.sites.size() * cols, 0.0);
    std::vector<double> lattice(static_cast<std::size_t>(grid.M));
    for (long j = 1; j <= grid.M; ++j) {
        lattice[j - 1] = static_cast<double>(j) / static_cast<double>(grid.M);
    }
    for (std::size_t i = 0; i < cols; ++i) {
        const auto coords = paths.column(static_cast<long>(i));
        const auto values = synthesize_field_at(coords, eta, plan.sites);
        for (std::size_t j = 0; j < plan.sites.size(); ++j) obs.site_values[j * cols + i] = values[j];
    }
    for (long t : plan.row_time_index) {
        auto values = synthesize_field_at(paths.column(t), eta, lattice);
        values.back() = 0.0;  // y = 1 exactly
        obs.row_values.insert(obs.row_values.end(), values.begin(), values.end());
    }
    return obs;
}

double truncation_diagnostic(const ThetaParams& theta, double epsilon, long K) {
    const double lam = lambda_k(theta, K);
    if (!(lam > 0.0)) return std::nan("");
    return epsilon / std::sqrt(2.0 * lam);
}

}  // namespace spde
