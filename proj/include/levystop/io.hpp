#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levystop/bounds.hpp"
#include "levystop/charroots.hpp"
#include "levystop/mc_oracle.hpp"
#include "levystop/model.hpp"
#include "levystop/stopping.hpp"

namespace levystop {

struct Config {
    ModelSpec model;
    std::optional<Payoff> payoff;
};

/// Keys: family, drift, volatility, jump_scale, lambda, jump_dist{kind, params},
/// r, payoff{kind, params}. Throws Error(ConfigError) on missing or mistyped keys.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::string& path);

JumpDistribution parse_jump_dist(const nlohmann::json& node);
Payoff parse_payoff(const nlohmann::json& node);

nlohmann::json to_json(const ModelSpec& spec);
nlohmann::json to_json(const JumpDistribution& dist);
nlohmann::json to_json(const Payoff& payoff);
nlohmann::json to_json(const Config& config);
nlohmann::json to_json(const RootResult& root);
nlohmann::json to_json(const ThresholdSolution& solution);
/// Summary without the grid rows (those go to CSV).
nlohmann::json to_json(const SandwichReport& report);

/// {mean, stderr, n_paths, horizon, truncation_bound, seed, target_analytic, z_score}
nlohmann::json report_json(const MCEstimate& estimate, double target);

/// RFC-4180 style: header row, comma separated, "\n" line ends, fields
/// quoted only when they contain a comma, quote or newline.
std::string csv_escape(const std::string& field);
std::string csv_row(const std::vector<std::string>& fields);

/// printf-style %.{digits}g / %.{digits}f formatting that does not depend on the locale.
std::string format_general(double v, int significant = 17);
std::string format_fixed(double v, int decimals);

}  // namespace levystop
