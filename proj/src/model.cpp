#include "spde/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "spde/errors.hpp"

namespace spde {

namespace {

constexpr double kPi = std::numbers::pi;

// Phase table for angles pi * r / (n - 1), r = 0..2(n-1)-1, so that
// sin(pi k y_i) on the tabulation grid needs only integer reduction.
struct PhaseTable {
    explicit PhaseTable(long intervals) : period(2 * intervals), cos_(period), sin_(period) {
        for (long r = 0; r < period; ++r) {
            const double angle = kPi * static_cast<double>(r) / static_cast<double>(intervals);
            cos_[r] = std::cos(angle);
            sin_[r] = std::sin(angle);
        }
    }
    long period;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

// int_0^1 c y (1 - y) e^{z y} dy for complex z with |z| >= pi.
std::complex<double> parabola_moment(double c, std::complex<double> z) {
    const std::complex<double> ez = std::exp(z);
    const std::complex<double> p0 = (ez - 1.0) / z;
    const std::complex<double> p1 = ez / z - p0 / z;
    return c * (2.0 * p1 - p0) / z;
}

}  // namespace

ThetaParams::ThetaParams(double theta0, double theta1, double theta2)
    : theta0_(theta0), theta1_(theta1), theta2_(theta2) {
    if (!(theta2 > 0.0) || !std::isfinite(theta2)) {
        throw DomainError("theta2 must be finite and > 0");
    }
    if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
        throw DomainError("theta0 and theta1 must be finite");
    }
}

double ThetaParams::sigma0_sq() const noexcept { return 1.0 / std::sqrt(theta2_); }

NoiseLevel::NoiseLevel(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw DomainError("epsilon must lie in (0, 1]");
    }
}

void validate_initial_condition(const InitialCondition& xi) {
    if (const auto* tab = std::get_if<TabulatedInitial>(&xi)) {
        if (tab->values.size() < 2) {
            throw ConfigError("tabulated initial condition needs at least two values");
        }
        double scale = 0.0;
        for (double v : tab->values) {
            if (!std::isfinite(v)) throw ConfigError("tabulated initial condition is not finite");
            scale = std::max(scale, std::abs(v));
        }
        const double tol = 1e-12 * std::max(1.0, scale);
        if (std::abs(tab->values.front()) > tol || std::abs(tab->values.back()) > tol) {
            throw ConfigError("tabulated initial condition must vanish at y = 0 and y = 1");
        }
    }
}

double evaluate_initial(const InitialCondition& xi, double y) {
    if (const auto* p = std::get_if<ParabolaInitial>(&xi)) {
        return p->c * y * (1.0 - y);
    }
    if (const auto* tab = std::get_if<TabulatedInitial>(&xi)) {
        const auto& v = tab->values;
        const double pos = std::clamp(y, 0.0, 1.0) * static_cast<double>(v.size() - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
        const double frac = pos - static_cast<double>(i);
        return v[i] + frac * (v[i + 1] - v[i]);
    }
    throw DomainError("explicit-coefficient initial condition has no pointwise profile");
}

std::string describe(const InitialCondition& xi) {
    std::ostringstream os;
    if (const auto* p = std::get_if<ParabolaInitial>(&xi)) {
        os << "parabola(c=" << p->c << ")";
    } else if (const auto* tab = std::get_if<TabulatedInitial>(&xi)) {
        os << "tabulated(" << tab->values.size() << " nodes)";
    } else {
        os << "coefficients(" << std::get<CoefficientInitial>(xi).values.size() << ")";
    }
    return os.str();
}

double lambda_k(const ThetaParams& theta, long k) {
    const double kk = static_cast<double>(k);
    return -theta.theta0() + theta.theta1() * theta.theta1() / (4.0 * theta.theta2()) +
           kPi * kPi * kk * kk * theta.theta2();
}

double eigenfunction(double eta, long k, double y) {
    return std::numbers::sqrt2 * std::sin(kPi * static_cast<double>(k) * y) *
           std::exp(-0.5 * eta * y);
}

double weighted_inner_product(const std::function<double(double)>& f,
                              const std::function<double(double)>& g, double eta,
                              int quadrature_n) {
    if (quadrature_n < 2) throw DomainError("quadrature_n must be >= 2");
    const int n = quadrature_n + (quadrature_n % 2);
    const double h = 1.0 / n;
    auto integrand = [&](int i) {
        const double y = i * h;
        return std::exp(eta * y) * f(y) * g(y);
    };
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < n; i += 2) odd += integrand(i);
    for (int i = 2; i < n; i += 2) even += integrand(i);
    return h / 3.0 * (integrand(0) + 4.0 * odd + 2.0 * even + integrand(n));
}

double initial_coefficient(const InitialCondition& xi, const ThetaParams& theta, long k,
                           int quadrature_n) {
    if (k < 1) throw DomainError("mode index must be >= 1");
    if (const auto* coef = std::get_if<CoefficientInitial>(&xi)) {
        return static_cast<std::size_t>(k) <= coef->values.size() ? coef->values[k - 1] : 0.0;
    }
    const double eta = theta.eta();
    const long min_nodes = 32 * k;
    const int n = static_cast<int>(std::max<long>(quadrature_n, min_nodes));
    return weighted_inner_product([&](double y) { return evaluate_initial(xi, y); },
                                  [&](double y) { return eigenfunction(eta, k, y); }, eta, n);
}

std::vector<double> initial_coefficients(const InitialCondition& xi, const ThetaParams& theta,
                                         long K) {
    if (K < 1) throw DomainError("number of modes must be >= 1");
    validate_initial_condition(xi);
    std::vector<double> out(static_cast<std::size_t>(K), 0.0);
    const double half_eta = 0.5 * theta.eta();

    if (const auto* coef = std::get_if<CoefficientInitial>(&xi)) {
        const auto n = std::min<std::size_t>(coef->values.size(), out.size());
        std::copy_n(coef->values.begin(), n, out.begin());
        return out;
    }

    if (const auto* p = std::get_if<ParabolaInitial>(&xi)) {
        for (long k = 1; k <= K; ++k) {
            const std::complex<double> z(half_eta, kPi * static_cast<double>(k));
            out[k - 1] = std::numbers::sqrt2 * parabola_moment(p->c, z).imag();
        }
        return out;
    }

    // Piecewise-linear profile: integrating by parts against e^{zy} leaves the
    // boundary values plus the jumps of the slope at interior nodes.
    const auto& v = std::get<TabulatedInitial>(xi).values;
    const long intervals = static_cast<long>(v.size()) - 1;
    const double h = 1.0 / static_cast<double>(intervals);
    std::vector<double> slope_jump(v.size(), 0.0);
    std::vector<double> envelope(v.size());
    for (long i = 0; i <= intervals; ++i) {
        const double left = i > 0 ? (v[i] - v[i - 1]) / h : 0.0;
        const double right = i < intervals ? (v[i + 1] - v[i]) / h : 0.0;
        slope_jump[i] = left - right;
        envelope[i] = std::exp(half_eta * static_cast<double>(i) * h);
    }
    const PhaseTable phase(intervals);
    for (long k = 1; k <= K; ++k) {
        const std::complex<double> z(half_eta, kPi * static_cast<double>(k));
        double re = 0.0;
        double im = 0.0;
        for (long i = 0; i <= intervals; ++i) {
            const long r = (k % phase.period) * i % phase.period;
            re += slope_jump[i] * envelope[i] * phase.cos_[r];
            im += slope_jump[i] * envelope[i] * phase.sin_[r];
        }
        const std::complex<double> ez = std::exp(z);
        const std::complex<double> total =
            (v.back() * ez - v.front()) / z - std::complex<double>(re, im) / (z * z);
        out[k - 1] = std::numbers::sqrt2 * total.imag();
    }
    return out;
}

ReparamTheta theta_from_reparam(double sigma0_sq, double eta) {
    if (!(sigma0_sq > 0.0)) throw DomainError("sigma0_sq must be > 0");
    const double theta2 = 1.0 / (sigma0_sq * sigma0_sq);
    return {theta2, eta * theta2};
}

}  // namespace spde
