#include <doctest.h>

#include <cmath>
#include <fstream>

#include "levystop/error.hpp"
#include "levystop/io.hpp"

using namespace levystop;
using nlohmann::json;

namespace {

json figure2_doc() {
    return json::parse(R"({
        "family": "geometric", "drift": 0.025, "volatility": 0.1, "lambda": 0.02, "r": 0.05,
        "jump_dist": {"kind": "beta", "params": {"c": 1.25, "d": 5}},
        "payoff": {"kind": "power_call", "params": {"a": 1, "b": 1, "K": 1}}
    })");
}

ErrorCode code_of(const json& doc) {
    try {
        parse_config(doc);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("parse a geometric config") {
    const Config c = parse_config(figure2_doc());
    CHECK(c.model.dynamics.family == Family::Geometric);
    CHECK(c.model.dynamics.drift == 0.025);
    CHECK(c.model.dynamics.volatility == 0.1);
    CHECK(c.model.dynamics.jump_scale == 1.0);
    CHECK(c.model.jump_intensity == 0.02);
    CHECK(c.model.discount == 0.05);
    const auto& b = std::get<jumps::BetaLaw>(c.model.jump_dist);
    CHECK(b.c == 1.25);
    CHECK(b.d == 5.0);
    REQUIRE(c.payoff.has_value());
    const auto& p = std::get<payoffs::PowerCall>(*c.payoff);
    CHECK(p.a == 1.0);
    CHECK(p.b == 1.0);
    CHECK(p.K == 1.0);
}

TEST_CASE("every jump law and payoff kind round-trips through JSON") {
    const std::vector<JumpDistribution> laws{jumps::GammaLaw{2, 3}, jumps::BetaLaw{1.5, 2}, jumps::ExponentialLaw{4},
                                             jumps::PointMass{0.3}, jumps::Tabulated{{0.1, 0.4}, {0.25, 0.75}}};
    for (const auto& d : laws) {
        const json j = to_json(d);
        CHECK(to_json(parse_jump_dist(j)) == j);
    }
    const std::vector<Payoff> payoffs{payoffs::CappedCall{2, 1}, payoffs::PowerCall{1, 0.2, 1},
                                      payoffs::Tabulated{{0, 1, 2}, {{-1, 1, 0, 0}, {0, 1, 0, 0}}}};
    for (const auto& p : payoffs) {
        const json j = to_json(p);
        CHECK(to_json(parse_payoff(j)) == j);
    }
    const Config c = parse_config(figure2_doc());
    CHECK(to_json(parse_config(to_json(c))) == to_json(c));
    const json normalized = to_json(c);
    for (const char* key : {"family", "drift", "volatility", "jump_scale", "lambda", "jump_dist", "r", "payoff"})
        CHECK(normalized.contains(key));
}

TEST_CASE("config errors") {
    json missing = figure2_doc();
    missing.erase("volatility");
    CHECK(code_of(missing) == ErrorCode::ConfigError);
    json bad_family = figure2_doc();
    bad_family["family"] = "cubic";
    CHECK(code_of(bad_family) == ErrorCode::ConfigError);
    json bad_type = figure2_doc();
    bad_type["lambda"] = "lots";
    CHECK(code_of(bad_type) == ErrorCode::ConfigError);
    json bad_kind = figure2_doc();
    bad_kind["jump_dist"]["kind"] = "cauchy";
    CHECK(code_of(bad_kind) == ErrorCode::ConfigError);
    json no_payoff = figure2_doc();
    no_payoff.erase("payoff");
    CHECK_FALSE(parse_config(no_payoff).payoff.has_value());
    CHECK_THROWS_AS(load_config("/nonexistent/levystop.json"), Error);
}

TEST_CASE("load a config from disk") {
    const std::string path = "levystop_io_test.json";
    {
        std::ofstream out(path);
        out << figure2_doc().dump();
    }
    const Config c = load_config(path);
    CHECK(c.model.jump_intensity == 0.02);
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    try {
        load_config(path);
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
    std::remove(path.c_str());
}

TEST_CASE("CSV quoting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    CHECK(csv_row({"x", "a,b", "1"}) == "x,\"a,b\",1\n");
}

TEST_CASE("number formatting") {
    CHECK(format_fixed(0.154, 2) == "0.15");
    CHECK(format_fixed(-0.0449, 2) == "-0.04");
    CHECK(format_fixed(-0.001, 2) == "0.00");
    CHECK(format_fixed(7.455, 1) == "7.5");
    CHECK(format_general(0.1, 17) == "0.10000000000000001");
    CHECK(format_general(0.1, 15) == "0.1");
    CHECK(std::stod(format_general(M_PI, 17)) == M_PI);
}

TEST_CASE("simulation report keys") {
    MCEstimate e;
    e.mean = 0.25;
    e.std_error = 0.01;
    e.n_paths = 100;
    e.horizon = 10.0;
    e.truncation_bound = 1e-4;
    e.seed = 7;
    const json j = report_json(e, 0.27);
    for (const char* key : {"mean", "stderr", "n_paths", "horizon", "truncation_bound", "seed", "target_analytic", "z_score"})
        CHECK(j.contains(key));
    CHECK(j["z_score"].get<double>() == doctest::Approx(-2.0));
    CHECK(j["seed"].get<int>() == 7);
    e.std_error = 0.0;
    CHECK(report_json(e, 0.25)["z_score"].get<double>() == 0.0);
    CHECK(report_json(e, 0.3)["z_score"].is_null());
}

TEST_CASE("root and solution JSON") {
    RootResult r{1.5, 1.2, 1.8, 1e-15, 9};
    const json j = to_json(r);
    CHECK(j["k1"] == 1.5);
    CHECK(j["bracket_low"] == 1.2);
    CHECK(j["bracket_high"] == 1.8);
    CHECK(j["iterations"] == 9);
}
