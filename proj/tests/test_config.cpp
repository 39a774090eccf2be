#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fairbasis/config.hpp"

using namespace fb;

namespace {

const char* kFullConfig =
    "# reference scenario\n"
    "model.kind = square_root\n"
    "model.lambda0 = 0.02\n"
    "model.kappa = 0.5\n"
    "model.theta = 0.04\n"
    "model.sigma = 0.1\n"
    "\n"
    "market.r = 0.02\n"
    "market.r_p = 0.0215\n"
    "market.r_1 = 0.034\n"
    "market.r_b = 0.034\n"
    "market.r_k = 0.12\n"
    "market.h = 0.1    # repo haircut\n"
    "market.epsilon = 0.05\n"
    "\n"
    "bond.coupon = 0.032\n"
    "bond.maturity = 10\n"
    "bond.recovery = 0.4\n"
    "\n"
    "cds.premium = 0.009\n"
    "cds.maturity = 10\n"
    "cds.recovery = 0.4\n"
    "\n"
    "capital.mode = fixed_exposure\n"
    "capital.fixed_exposure = 0.25\n"
    "\n"
    "numerics.n_lambda = 151\n"
    "numerics.mc_paths = 20000\n"
    "numerics.seed = 42\n"
    "numerics.antithetic = true\n"
    "output.prefix = ig\n";

}  // namespace

TEST_CASE("full scenario parses with optional keys defaulted") {
    ScenarioConfig cfg = parse_config_text(kFullConfig);
    CHECK(cfg.has_model);
    CHECK(cfg.has_market);
    CHECK(cfg.has_bond);
    CHECK(cfg.has_cds);
    CHECK(cfg.has_capital);
    CHECK(cfg.model.kind == ModelKind::square_root);
    CHECK(cfg.model.lambda0 == 0.02);
    CHECK(cfg.model.sigma == 0.1);
    CHECK(cfg.market.r_p == 0.0215);
    CHECK(cfg.market.z == cfg.market.r);      // defaults to r
    CHECK(cfg.market.r_L == cfg.market.r);    // defaults to r
    CHECK(cfg.market.h == 0.1);
    CHECK(cfg.bond.maturity == 10.0);
    CHECK(cfg.cds.premium == 0.009);
    CHECK(cfg.capital.mode == CapitalMode::fixed_exposure);
    CHECK(cfg.capital.fixed_exposure == 0.25);
    CHECK(cfg.capital.lgd == 0.45);           // default
    CHECK(cfg.grid.n_lambda == 151);
    CHECK(cfg.grid.width_sigmas == 6.0);      // default
    CHECK(cfg.grid.n_steps == 0);             // default: derive from maturity
    CHECK(cfg.mc.n_paths == 20000);
    CHECK(cfg.mc.n_steps_per_year == 250);    // default
    CHECK(cfg.mc.seed == 42);
    CHECK(cfg.mc.antithetic);
    CHECK(cfg.out_dir == ".");
    CHECK(cfg.prefix == "ig");
    CHECK_NOTHROW(cfg.require("model"));
    CHECK_NOTHROW(cfg.require("capital"));
}

TEST_CASE("absent sections stay absent and require() names them") {
    ScenarioConfig cfg = parse_config_text("model.kind = constant\nmodel.lambda0 = 0.03\n");
    CHECK(cfg.has_model);
    CHECK(!cfg.has_market);
    CHECK(!cfg.has_capital);
    CHECK_THROWS_WITH_AS(cfg.require("market"), doctest::Contains("market"),
                         std::invalid_argument);
}

TEST_CASE("parser reports the offending key") {
    CHECK_THROWS_WITH_AS(parse_config_text("model.kind = constant\nmodel.lambda0 = 0.03\n"
                                           "market.r = 0.02\nmarket.r_p = 0.02\n"
                                           "market.r_1 = 0.02\nmarket.r_b = 0.02\n"
                                           "market.r_k = 0.02\nmarket.h = 0.1\n"
                                           "market.epsilon = 0.05\nmarket.bogus = 1\n"),
                         doctest::Contains("bogus"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("bond.coupon = 0.05\nbond.coupon = 0.06\n"),
                         doctest::Contains("duplicate"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("model.kind = constant\nmodel.lambda0 = abc\n"),
                         doctest::Contains("model.lambda0"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("model.kind = constant\n"),
                         doctest::Contains("model.lambda0"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("model.kind = lognormal\nmodel.lambda0 = 0.1\n"),
                         doctest::Contains("model.kind"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("just some words\n"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("seed = 1\n"), doctest::Contains("bad key"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("numerics.antithetic = yes\n"),
                         doctest::Contains("true/false"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config_text("numerics.mc_paths = 50\n"),
                         doctest::Contains("n_paths"), std::invalid_argument);
}

TEST_CASE("section validation runs at parse time") {
    std::string bad_h =
        "market.r = 0.02\nmarket.r_p = 0.02\nmarket.r_1 = 0.02\nmarket.r_b = 0.02\n"
        "market.r_k = 0.02\nmarket.h = 1.2\nmarket.epsilon = 0.05\n";
    CHECK_THROWS_WITH_AS(parse_config_text(bad_h), doctest::Contains("market.h"),
                         std::invalid_argument);
    std::string bad_rl =
        "market.r = 0.02\nmarket.r_l = 0.03\nmarket.r_p = 0.02\nmarket.r_1 = 0.02\n"
        "market.r_b = 0.02\nmarket.r_k = 0.02\nmarket.h = 0.1\nmarket.epsilon = 0.05\n";
    CHECK_THROWS_WITH_AS(parse_config_text(bad_rl), doctest::Contains("r_L"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("bond.coupon = 0.05\nbond.maturity = -1\n"
                                      "bond.recovery = 0.4\n"),
                    std::invalid_argument);
}

TEST_CASE("serialization round-trips every model kind") {
    const char* models[] = {
        "model.kind = constant\nmodel.lambda0 = 0.03\n",
        "model.kind = curve\nmodel.curve_times = 0,1,3\nmodel.curve_values = 0.02,0.05,0.01\n",
        "model.kind = arithmetic\nmodel.lambda0 = 0.02\nmodel.a = 0.001\nmodel.b = 0.01\n",
        "model.kind = square_root\nmodel.lambda0 = 0.02\nmodel.kappa = 0.5\n"
        "model.theta = 0.04\nmodel.sigma = 0.1\n",
    };
    for (const char* m : models) {
        ScenarioConfig a = parse_config_text(m);
        std::string s1 = serialize_config(a);
        ScenarioConfig b = parse_config_text(s1);
        std::string s2 = serialize_config(b);
        CHECK(s1 == s2);
        CHECK(a.model.kind == b.model.kind);
        CHECK(a.model.lambda0 == b.model.lambda0);
        CHECK(a.model.curve_times == b.model.curve_times);
        CHECK(a.model.curve_values == b.model.curve_values);
    }

    ScenarioConfig full = parse_config_text(kFullConfig);
    std::string s1 = serialize_config(full);
    ScenarioConfig again = parse_config_text(s1);
    CHECK(serialize_config(again) == s1);
    CHECK(again.market.z == full.market.z);
    CHECK(again.capital.mode == full.capital.mode);
    CHECK(again.mc.seed == full.mc.seed);
    CHECK(again.prefix == full.prefix);
}
