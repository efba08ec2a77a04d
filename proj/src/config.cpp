#include "spde/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "spde/errors.hpp"
#include "spde/field_io.hpp"
#include "spde/simulator.hpp"

namespace spde {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
    }
}

double get_real(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + key + " must be a number");
    return v.get<double>();
}

long get_int(const json& j, const char* key, long fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + key + " must be an integer");
    return v.get<long>();
}

std::vector<double> get_real_array(const json& v, const std::string& name) {
    if (!v.is_array()) throw ConfigError(name + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(name + " must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

json xi_to_json(const InitialCondition& xi) {
    if (const auto* p = std::get_if<ParabolaInitial>(&xi)) return {{"kind", "parabola"}, {"c", p->c}};
    if (const auto* t = std::get_if<TabulatedInitial>(&xi)) {
        return {{"kind", "tabulated"}, {"values", t->values}};
    }
    return {{"kind", "coefficients"}, {"values", std::get<CoefficientInitial>(xi).values}};
}

InitialCondition xi_from_json(const json& j) {
    reject_unknown(j, {"kind", "c", "values"}, "xi.");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("xi.kind must be a string");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "parabola") {
        if (j.contains("values")) throw ConfigError("xi.values is not used by kind 'parabola'");
        return ParabolaInitial{get_real(j, "c", 0.0, "xi.")};
    }
    if (j.contains("c")) throw ConfigError("xi.c is only used by kind 'parabola'");
    if (!j.contains("values")) throw ConfigError("xi.values is required for kind '" + kind + "'");
    auto values = get_real_array(j.at("values"), "xi.values");
    if (kind == "tabulated") return TabulatedInitial{std::move(values)};
    if (kind == "coefficients") return CoefficientInitial{std::move(values)};
    throw ConfigError("xi.kind must be parabola, tabulated or coefficients");
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
    grid().validate();
    if (N2 < 1 || N2 > N) throw ConfigError("N2 must lie in 1..N");
    if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("delta must lie in (0, 1/2)");
    ThinnedSpatialGrid(M, delta, m);  // checks m against Mbar
    if (replicates < 1) throw ConfigError("replicates must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (x1_0_override && !std::isfinite(*x1_0_override)) throw ConfigError("x1_0_override must be finite");
    validate_initial_condition(xi);
    contrast_box.validate();
    lambda_search.validate();
}

EstimationSettings ExperimentConfig::estimation_settings() const {
    EstimationSettings s;
    s.epsilon = epsilon;
    s.delta = delta;
    s.m = m;
    s.N2 = N2;
    s.box = contrast_box;
    s.lambda_search = lambda_search;
    return s;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["theta_star"] = {{"theta0", c.theta_star.theta0()},
                       {"theta1", c.theta_star.theta1()},
                       {"theta2", c.theta_star.theta2()}};
    j["epsilon"] = c.epsilon;
    j["N"] = c.N;
    j["M"] = c.M;
    j["K"] = c.K;
    j["N2"] = c.N2;
    j["m"] = c.m;
    j["T"] = c.T;
    j["delta"] = c.delta;
    j["xi"] = xi_to_json(c.xi);
    j["x1_0_override"] = c.x1_0_override ? nlohmann::ordered_json(*c.x1_0_override) : nlohmann::ordered_json(nullptr);
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["contrast_box"] = {{"sigma0_sq_min", c.contrast_box.sigma0_sq_min},
                         {"sigma0_sq_max", c.contrast_box.sigma0_sq_max},
                         {"eta_min", c.contrast_box.eta_min},
                         {"eta_max", c.contrast_box.eta_max},
                         {"grid_points", c.contrast_box.grid_points}};
    j["lambda_search"] = {{"lambda_min", c.lambda_search.lambda_min},
                          {"lambda_max", c.lambda_search.lambda_max},
                          {"scan_points", c.lambda_search.scan_points},
                          {"tolerance", c.lambda_search.tolerance}};
    j["fisher_use_horizon"] = c.fisher_use_horizon;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"theta_star", "epsilon", "N", "M", "K", "N2", "m", "T", "delta", "xi",
                    "x1_0_override", "replicates", "seed", "output_dir", "contrast_box",
                    "lambda_search", "fisher_use_horizon"},
                   "");
    ExperimentConfig c;
    if (j.contains("theta_star")) {
        const auto& t = j.at("theta_star");
        reject_unknown(t, {"theta0", "theta1", "theta2"}, "theta_star.");
        try {
            c.theta_star = ThetaParams(get_real(t, "theta0", c.theta_star.theta0(), "theta_star."),
                                       get_real(t, "theta1", c.theta_star.theta1(), "theta_star."),
                                       get_real(t, "theta2", c.theta_star.theta2(), "theta_star."));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("theta_star: ") + e.what());
        }
    }
    c.epsilon = get_real(j, "epsilon", c.epsilon, "");
    c.N = get_int(j, "N", c.N, "");
    c.M = get_int(j, "M", c.M, "");
    c.K = get_int(j, "K", c.K, "");
    c.N2 = get_int(j, "N2", c.N2, "");
    c.m = get_int(j, "m", c.m, "");
    c.T = get_real(j, "T", c.T, "");
    c.delta = get_real(j, "delta", c.delta, "");
    if (j.contains("xi")) c.xi = xi_from_json(j.at("xi"));
    if (j.contains("x1_0_override")) {
        const auto& v = j.at("x1_0_override");
        if (v.is_null()) {
            c.x1_0_override.reset();
        } else if (v.is_number()) {
            c.x1_0_override = v.get<double>();
        } else {
            throw ConfigError("x1_0_override must be a number or null");
        }
    }
    c.replicates = get_int(j, "replicates", c.replicates, "");
    if (j.contains("seed")) {
        const auto& v = j.at("seed");
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError("seed must be a non-negative integer");
        }
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("contrast_box")) {
        const auto& b = j.at("contrast_box");
        reject_unknown(b, {"sigma0_sq_min", "sigma0_sq_max", "eta_min", "eta_max", "grid_points"},
                       "contrast_box.");
        auto& box = c.contrast_box;
        box.sigma0_sq_min = get_real(b, "sigma0_sq_min", box.sigma0_sq_min, "contrast_box.");
        box.sigma0_sq_max = get_real(b, "sigma0_sq_max", box.sigma0_sq_max, "contrast_box.");
        box.eta_min = get_real(b, "eta_min", box.eta_min, "contrast_box.");
        box.eta_max = get_real(b, "eta_max", box.eta_max, "contrast_box.");
        box.grid_points = static_cast<int>(get_int(b, "grid_points", box.grid_points, "contrast_box."));
    }
    if (j.contains("lambda_search")) {
        const auto& l = j.at("lambda_search");
        reject_unknown(l, {"lambda_min", "lambda_max", "scan_points", "tolerance"}, "lambda_search.");
        auto& ls = c.lambda_search;
        ls.lambda_min = get_real(l, "lambda_min", ls.lambda_min, "lambda_search.");
        ls.lambda_max = get_real(l, "lambda_max", ls.lambda_max, "lambda_search.");
        ls.scan_points = static_cast<int>(get_int(l, "scan_points", ls.scan_points, "lambda_search."));
        ls.tolerance = get_real(l, "tolerance", ls.tolerance, "lambda_search.");
    }
    if (j.contains("fisher_use_horizon")) {
        if (!j.at("fisher_use_horizon").is_boolean()) throw ConfigError("fisher_use_horizon must be a boolean");
        c.fisher_use_horizon = j.at("fisher_use_horizon").get<bool>();
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
    return config_from_json(j);
}

json apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) throw ConfigError("empty path component in override " + key);
        if (!node->is_object()) {
            if (!node->is_null()) throw ConfigError("override path " + key + " crosses a non-object");
            *node = json::object();
        }
        if (dot == std::string::npos) {
            json previous = node->contains(part) ? (*node)[part] : json(nullptr);
            (*node)[part] = value;
            return previous;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

std::string config_reference() {
    const ExperimentConfig d;
    std::ostringstream os;
    os << "Config keys (JSON, snake_case; unknown keys are rejected):\n"
       << "  theta_star.theta0 / .theta1 / .theta2  real, true drift coefficients (theta2 > 0); default 0 / 1 / 0.2\n"
       << "  epsilon            real in [0,1], known noise level (0 simulates only); default " << d.epsilon << "\n"
       << "  N                  int >= 1, time steps on [0,T]; default " << d.N << "\n"
       << "  M                  int >= 1, space steps, y_j = j/M; default " << d.M << "\n"
       << "  K                  int >= 1, retained spectral modes; default " << d.K << "\n"
       << "  N2                 int in 1..N, thinned time points for the likelihood; default " << d.N2 << "\n"
       << "  m                  int, thinned spatial sites for the contrast; default " << d.m << "\n"
       << "  T                  real > 0, time horizon; default " << d.T << "\n"
       << "  delta              real in (0,1/2), spatial cutoff of the thinned sites; default " << d.delta << "\n"
       << "  xi.kind            parabola | tabulated | coefficients; default parabola\n"
       << "  xi.c               real, parabola xi(y) = c y (1-y); default 4.2\n"
       << "  xi.values          real array: tabulated xi on y = i/(n-1), or x_k(0) for k = 1..n\n"
       << "  x1_0_override      real or null, replaces the projected x_1(0); default 3\n"
       << "  replicates         int >= 1, Monte-Carlo replicates; default " << d.replicates << "\n"
       << "  seed               uint64, base seed of the noise streams; default " << d.seed << "\n"
       << "  output_dir         string, output directory; default " << d.output_dir << "\n"
       << "  contrast_box.sigma0_sq_min / .sigma0_sq_max   search range of sigma0^2; default 0.01 / 100\n"
       << "  contrast_box.eta_min / .eta_max               search range of eta; default -20 / 20\n"
       << "  contrast_box.grid_points                      scan points per axis; default 64\n"
       << "  lambda_search.lambda_min / .lambda_max        likelihood search interval; default 1e-6 / 200\n"
       << "  lambda_search.scan_points                     log-spaced scan points; default 256\n"
       << "  lambda_search.tolerance                       Brent tolerance in lambda; default 1e-8\n"
       << "  fisher_use_horizon bool, use T in the Fisher information (false: T = 1 form); default true\n";
    return os.str();
}

nlohmann::ordered_json rate_diagnostics(const ExperimentConfig& c) {
    const double N = static_cast<double>(c.N);
    const double M = static_cast<double>(c.M);
    const double m = static_cast<double>(c.m);
    const double N2 = static_cast<double>(c.N2);
    nlohmann::ordered_json j;
    j["m_over_sqrt_N"] = m / std::sqrt(N);
    j["rho_effective"] = c.N > 1 ? std::log(m) / std::log(N) : std::nan("");
    j["N2_over_eps2_N_m"] = c.epsilon > 0.0 ? N2 / (c.epsilon * c.epsilon * N * m) : std::nan("");
    j["N2_over_sqrt_M"] = N2 / std::sqrt(M);  // N2 / M^{1 - rho1} at rho1 = 1/2
    j["N_m_over_M2"] = N * m / (M * M);
    j["eps_sqrt_N2"] = c.epsilon * std::sqrt(N2);
    j["truncation_sd"] = truncation_diagnostic(c.theta_star, c.epsilon, c.K);
    return j;
}

std::vector<std::string> config_warnings(const ExperimentConfig& c) {
    std::vector<std::string> w;
    if (static_cast<double>(c.m) > std::sqrt(static_cast<double>(c.N))) w.emplace_back("m_exceeds_sqrt_N");
    if (!(lambda_k(c.theta_star, 1) > 0.0)) w.emplace_back("lambda1_not_positive");
    if (c.epsilon == 0.0) w.emplace_back("epsilon_zero");
    return w;
}

}  // namespace spde
