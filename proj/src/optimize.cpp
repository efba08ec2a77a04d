#include "spde/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spde/errors.hpp"

namespace spde {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, std::span<const double> steps,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0 || steps.size() != n) throw DomainError("nelder_mead: dimension mismatch");

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& p) {
        ++result.evaluations;
        const double v = objective(p);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += steps[i];
    std::vector<double> values(n + 1);
    for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    auto along = [&](std::vector<double>& out, double t) {
        const auto& worst = simplex[order[n]];
        for (std::size_t d = 0; d < n; ++d) out[d] = centroid[d] + t * (worst[d] - centroid[d]);
    };

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const auto& best = simplex[order[0]];
        double f_spread = 0.0;
        double x_spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            f_spread = std::max(f_spread, std::abs(values[order[i]] - values[order[0]]));
            for (std::size_t d = 0; d < n; ++d) {
                x_spread = std::max(x_spread, std::abs(simplex[order[i]][d] - best[d]));
            }
        }
        if (std::isfinite(values[order[0]]) && f_spread <= options.f_tolerance &&
            x_spread <= options.x_tolerance) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= options.max_evaluations) break;
        ++result.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[order[i]][d];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        const double f_best = values[order[0]];
        const double f_second_worst = values[order[n - 1]];
        const double f_worst = values[order[n]];

        along(trial, -1.0);
        const double f_reflect = eval(trial);
        if (f_reflect < f_best) {
            along(trial2, -2.0);
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                simplex[order[n]] = trial2;
                values[order[n]] = f_expand;
            } else {
                simplex[order[n]] = trial;
                values[order[n]] = f_reflect;
            }
        } else if (f_reflect < f_second_worst) {
            simplex[order[n]] = trial;
            values[order[n]] = f_reflect;
        } else {
            const bool outside = f_reflect < f_worst;
            along(trial2, outside ? -0.5 : 0.5);
            const double f_contract = eval(trial2);
            if (f_contract < (outside ? f_reflect : f_worst)) {
                simplex[order[n]] = trial2;
                values[order[n]] = f_contract;
            } else {
                const auto anchor = simplex[order[0]];
                for (std::size_t i = 1; i <= n; ++i) {
                    auto& p = simplex[order[i]];
                    for (std::size_t d = 0; d < n; ++d) p[d] = anchor[d] + 0.5 * (p[d] - anchor[d]);
                    values[order[i]] = eval(p);
                }
            }
        }
        result.trace.push_back(*std::min_element(values.begin(), values.end()));
    }

    const auto best = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

ScalarOptimum brent_minimize(const std::function<double(double)>& objective, double lo, double hi,
                             double abs_tolerance, int max_iterations) {
    if (!(lo < hi)) throw DomainError("brent_minimize: empty bracket");
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    const double rel = 4.0 * std::numeric_limits<double>::epsilon();

    ScalarOptimum out;
    auto f = [&](double x) {
        ++out.evaluations;
        const double v = objective(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    double a = lo, b = hi;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;

    for (int iter = 0; iter < max_iterations; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol = rel * std::abs(x) + abs_tolerance / 4.0;
        const double tol2 = 2.0 * tol;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;

        bool golden_step = true;
        if (std::abs(e) > tol) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p; else q = -q;
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < mid) ? tol : -tol;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x < mid) ? b - x : a - x;
            d = golden * e;
        }
        const double u = x + (std::abs(d) >= tol ? d : (d > 0.0 ? tol : -tol));
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    out.x = x;
    out.value = fx;
    return out;
}

}  // namespace spde
