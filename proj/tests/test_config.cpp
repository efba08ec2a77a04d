#include <gtest/gtest.h>

#include "spde/config.hpp"
#include "spde/errors.hpp"

using namespace spde;
using nlohmann::json;

TEST(Config, DefaultsAreTheDeskProfile) {
    const ExperimentConfig c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.N, 2000);
    EXPECT_EQ(c.K, 20000);
    EXPECT_EQ(c.m, 63);
    EXPECT_EQ(c.N2, 200);
    EXPECT_EQ(c.replicates, 100);
    EXPECT_EQ(c.x1_0_override, 3.0);
}

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c;
    c.theta_star = ThetaParams(3.1, 1.0, 0.2);
    c.xi = TabulatedInitial{{0.0, 0.25, 0.1, 0.0}};
    c.x1_0_override.reset();
    c.seed = 18446744073709551615ull;
    const auto dumped = json::parse(config_to_json(c).dump());
    const auto back = config_from_json(dumped);
    EXPECT_EQ(config_to_json(back).dump(), config_to_json(c).dump());
    EXPECT_EQ(back.seed, c.seed);
    EXPECT_FALSE(back.x1_0_override.has_value());
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_THROW(config_from_json(json{{"epsilom", 0.1}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"theta_star", {{"theta3", 1}}}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"xi", {{"kind", "parabola"}, {"values", {1}}}}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"xi", {{"kind", "spline"}, {"values", {0, 0}}}}}), ConfigError);
}

TEST(Config, TypesChecked) {
    EXPECT_THROW(config_from_json(json{{"N", 2000.5}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"epsilon", "0.1"}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"seed", -1}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"x1_0_override", "three"}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"fisher_use_horizon", 1}}), ConfigError);
}

TEST(Config, ValidationErrors) {
    EXPECT_THROW(config_from_json(json{{"replicates", 0}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"epsilon", 1.5}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"N2", 3000}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"m", 5000}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"theta_star", {{"theta2", 0.0}}}}), ConfigError);
    EXPECT_THROW(config_from_json(json{{"xi", {{"kind", "tabulated"}, {"values", {1.0, 0.0}}}}}), ConfigError);
    EXPECT_NO_THROW(config_from_json(json{{"epsilon", 0.0}}));
}

TEST(Config, OverridesParseJsonThenString) {
    json doc = {{"epsilon", 0.1}};
    EXPECT_EQ(apply_override(doc, "epsilon=0.25"), json(0.1));
    EXPECT_EQ(apply_override(doc, "theta_star.theta0=3.1"), json(nullptr));
    EXPECT_EQ(apply_override(doc, "output_dir=runs/a"), json(nullptr));
    EXPECT_EQ(apply_override(doc, "x1_0_override=null"), json(nullptr));
    const auto c = config_from_json(doc);
    EXPECT_DOUBLE_EQ(c.epsilon, 0.25);
    EXPECT_DOUBLE_EQ(c.theta_star.theta0(), 3.1);
    EXPECT_EQ(c.output_dir, "runs/a");
    EXPECT_FALSE(c.x1_0_override.has_value());
    EXPECT_THROW(apply_override(doc, "epsilon"), ConfigError);
    EXPECT_THROW(apply_override(doc, "epsilon.x=1"), ConfigError);
    apply_override(doc, "bogus=1");
    EXPECT_THROW(config_from_json(doc), ConfigError);
}

TEST(Config, ReferenceListsEveryKey) {
    const auto ref = config_reference();
    const auto defaults = config_to_json(ExperimentConfig{});
    for (const auto& [key, value] : defaults.items()) {
        EXPECT_NE(ref.find(key), std::string::npos) << key;
        if (value.is_object()) {
            for (const auto& [sub, _] : value.items()) EXPECT_NE(ref.find(sub), std::string::npos) << sub;
        }
    }
}

TEST(Config, RateDiagnostics) {
    ExperimentConfig c;
    const auto r = rate_diagnostics(c);
    EXPECT_NEAR(r["m_over_sqrt_N"].get<double>(), 63 / std::sqrt(2000.0), 1e-12);
    EXPECT_NEAR(r["N2_over_sqrt_M"].get<double>(), 200 / std::sqrt(2000.0), 1e-12);
    EXPECT_NEAR(r["N_m_over_M2"].get<double>(), 2000.0 * 63 / 4e6, 1e-15);
    // The desk profile has m = 63 > sqrt(2000); the paper scale (1e4, 99) does not.
    EXPECT_EQ(config_warnings(c), std::vector<std::string>{"m_exceeds_sqrt_N"});
    c.N = c.M = 10000;
    c.m = 99;
    EXPECT_TRUE(config_warnings(c).empty());
}
