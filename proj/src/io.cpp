#include "levystop/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "levystop/error.hpp"

namespace levystop {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

double number(const json& node, const char* key) {
    if (!node.is_object() || !node.contains(key)) config_error(std::string("missing key '") + key + "'");
    const json& v = node.at(key);
    if (!v.is_number()) config_error(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> numbers(const json& node, const char* key) {
    if (!node.is_object() || !node.contains(key)) config_error(std::string("missing key '") + key + "'");
    const json& v = node.at(key);
    if (!v.is_array()) config_error(std::string("key '") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) config_error(std::string("key '") + key + "' must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string kind_of(const json& node, const char* what) {
    if (!node.is_object() || !node.contains("kind") || !node.at("kind").is_string())
        config_error(std::string(what) + " needs a string 'kind'");
    return node.at("kind").get<std::string>();
}

const json& params_of(const json& node, const char* what) {
    if (!node.contains("params") || !node.at("params").is_object())
        config_error(std::string(what) + " needs a 'params' object");
    return node.at("params");
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

JumpDistribution parse_jump_dist(const json& node) {
    const std::string kind = kind_of(node, "jump_dist");
    const json& p = params_of(node, "jump_dist");
    if (kind == "gamma") return jumps::GammaLaw{number(p, "shape"), number(p, "rate")};
    if (kind == "beta") return jumps::BetaLaw{number(p, "c"), number(p, "d")};
    if (kind == "exponential") return jumps::ExponentialLaw{number(p, "rate")};
    if (kind == "point_mass") return jumps::PointMass{number(p, "z")};
    if (kind == "tabulated") return jumps::Tabulated{numbers(p, "nodes"), numbers(p, "weights")};
    config_error("unknown jump_dist kind '" + kind + "'");
}

Payoff parse_payoff(const json& node) {
    const std::string kind = kind_of(node, "payoff");
    const json& p = params_of(node, "payoff");
    if (kind == "capped_call") return payoffs::CappedCall{number(p, "K"), number(p, "I")};
    if (kind == "power_call") return payoffs::PowerCall{number(p, "a"), number(p, "b"), number(p, "K")};
    if (kind == "tabulated") {
        payoffs::Tabulated t;
        t.breakpoints = numbers(p, "breakpoints");
        if (!p.contains("coefficients") || !p.at("coefficients").is_array())
            config_error("tabulated payoff needs a 'coefficients' array");
        for (const auto& row : p.at("coefficients")) {
            if (!row.is_array() || row.size() != 4) config_error("each coefficient row must hold 4 numbers");
            std::array<double, 4> c{};
            for (std::size_t i = 0; i < 4; ++i) {
                if (!row[i].is_number()) config_error("coefficients must be numbers");
                c[i] = row[i].get<double>();
            }
            t.coefficients.push_back(c);
        }
        return t;
    }
    config_error("unknown payoff kind '" + kind + "'");
}

Config parse_config(const json& doc) {
    if (!doc.is_object()) config_error("config must be a JSON object");
    Config cfg;
    if (!doc.contains("family") || !doc.at("family").is_string()) config_error("missing string key 'family'");
    const std::string family = doc.at("family").get<std::string>();
    if (family == "arithmetic")
        cfg.model.dynamics.family = Family::Arithmetic;
    else if (family == "geometric")
        cfg.model.dynamics.family = Family::Geometric;
    else
        config_error("family must be 'arithmetic' or 'geometric'");
    cfg.model.dynamics.drift = number(doc, "drift");
    cfg.model.dynamics.volatility = number(doc, "volatility");
    cfg.model.dynamics.jump_scale = doc.contains("jump_scale") ? number(doc, "jump_scale") : 1.0;
    cfg.model.jump_intensity = number(doc, "lambda");
    cfg.model.discount = number(doc, "r");
    if (!doc.contains("jump_dist")) config_error("missing key 'jump_dist'");
    cfg.model.jump_dist = parse_jump_dist(doc.at("jump_dist"));
    if (doc.contains("payoff") && !doc.at("payoff").is_null()) cfg.payoff = parse_payoff(doc.at("payoff"));
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        config_error(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

json to_json(const JumpDistribution& dist) {
    return std::visit(
        overloaded{
            [](const jumps::GammaLaw& g) { return json{{"kind", "gamma"}, {"params", {{"shape", g.shape}, {"rate", g.rate}}}}; },
            [](const jumps::BetaLaw& b) { return json{{"kind", "beta"}, {"params", {{"c", b.c}, {"d", b.d}}}}; },
            [](const jumps::ExponentialLaw& e) { return json{{"kind", "exponential"}, {"params", {{"rate", e.rate}}}}; },
            [](const jumps::PointMass& p) { return json{{"kind", "point_mass"}, {"params", {{"z", p.z}}}}; },
            [](const jumps::Tabulated& t) {
                return json{{"kind", "tabulated"}, {"params", {{"nodes", t.nodes}, {"weights", t.weights}}}};
            },
        },
        dist);
}

json to_json(const Payoff& payoff) {
    return std::visit(
        overloaded{
            [](const payoffs::CappedCall& c) { return json{{"kind", "capped_call"}, {"params", {{"K", c.K}, {"I", c.I}}}}; },
            [](const payoffs::PowerCall& p) {
                return json{{"kind", "power_call"}, {"params", {{"a", p.a}, {"b", p.b}, {"K", p.K}}}};
            },
            [](const payoffs::Tabulated& t) {
                json rows = json::array();
                for (const auto& c : t.coefficients) rows.push_back(json::array({c[0], c[1], c[2], c[3]}));
                return json{{"kind", "tabulated"}, {"params", {{"breakpoints", t.breakpoints}, {"coefficients", rows}}}};
            },
        },
        payoff);
}

json to_json(const ModelSpec& spec) {
    return json{{"family", spec.dynamics.family == Family::Arithmetic ? "arithmetic" : "geometric"},
                {"drift", spec.dynamics.drift},
                {"volatility", spec.dynamics.volatility},
                {"jump_scale", spec.dynamics.family == Family::Arithmetic ? spec.dynamics.jump_scale : 1.0},
                {"lambda", spec.jump_intensity},
                {"jump_dist", to_json(spec.jump_dist)},
                {"r", spec.discount}};
}

json to_json(const Config& config) {
    json out = to_json(config.model);
    out["payoff"] = config.payoff ? to_json(*config.payoff) : json(nullptr);
    return out;
}

json to_json(const RootResult& root) {
    return json{{"k1", root.k1},
                {"bracket_low", root.bracket_low},
                {"bracket_high", root.bracket_high},
                {"residual", root.residual},
                {"iterations", root.iterations}};
}

json to_json(const ThresholdSolution& s) {
    return json{{"x_star", s.x_star},
                {"k1", s.k1},
                {"value_at_star", s.value_at_star},
                {"multiplier", s.multiplier ? json(*s.multiplier) : json(nullptr)},
                {"kink_optimum", s.kink_optimum},
                {"smooth_fit", {{"smooth", s.smooth_fit.smooth}, {"gap", s.smooth_fit.gap}}},
                {"warnings", s.warnings}};
}

json to_json(const SandwichReport& r) {
    return json{{"root", to_json(r.root)},
                {"solution", to_json(r.solution)},
                {"k_low", r.k_low},
                {"k_high", r.k_high},
                {"x_star_low", r.x_star_low},
                {"x_star_high", r.x_star_high},
                {"theta_star", r.theta_star},
                {"mu_tilde", r.mu_tilde},
                {"grid_points", r.grid_values.size()}};
}

json report_json(const MCEstimate& e, double target) {
    double z = 0.0;
    if (e.std_error > 0.0)
        z = (e.mean - target) / e.std_error;
    else if (e.mean != target)
        z = std::copysign(std::numeric_limits<double>::infinity(), e.mean - target);
    return json{{"mean", e.mean},
                {"stderr", e.std_error},
                {"n_paths", e.n_paths},
                {"horizon", e.horizon},
                {"truncation_bound", e.truncation_bound},
                {"seed", e.seed},
                {"target_analytic", target},
                {"z_score", nullable(z)}};
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    return out + "\n";
}

std::string format_general(double v, int significant) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, res.ptr);
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace levystop
