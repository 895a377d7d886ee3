#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levystop/model.hpp"

namespace levystop {

enum class Target { Table1, Table2, Table3, Figure1, Figure2, Figure3 };

std::optional<Target> parse_target(std::string_view name);

struct DataTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    bool percent = false;  ///< growth-rate tables, reported in percentage points
};

/// Growth-rate premium table: rows lambda, columns sigma, entries
/// 100 (r / k1 - drift) in percentage points.
DataTable growth_table(const ModelSpec& base, const std::vector<double>& sigmas,
                       const std::vector<double>& lambdas);

/// Parameter sets used by the built-in reproduction targets.
ModelSpec table1_model();
ModelSpec table2_model();
ModelSpec table3_model();
ModelSpec figure2_model();  ///< also figure 1
ModelSpec figure3_model();
Payoff figure2_payoff();
Payoff figure3_payoff();

DataTable reproduce(Target target);

enum class Precision { Rounded, Full };

/// Percent tables: 2 decimals when Rounded; figure data: 6 decimals.
std::string to_csv(const DataTable& table, Precision precision);

enum class SweepParam { Sigma, Lambda };
enum class Trend { StrictlyIncreasing, StrictlyDecreasing, Nondecreasing, Nonincreasing, Constant, Mixed };

std::string_view to_string(Trend trend) noexcept;

struct SweepRow {
    double param;
    double k1;
    double x_star;
    double theta_star;
    double mu_hat;  ///< r / k1 (per unit state for the geometric family)
};

struct SweepResult {
    SweepParam param = SweepParam::Sigma;
    std::vector<SweepRow> rows;
    std::string regime;  ///< "convex", "concave" or "mixed"
    Trend k1_expected;
    Trend k1_observed;
    Trend x_star_observed;
    bool k1_ok = false;
    bool x_star_ok = false;  ///< x* moves weakly opposite to k1
};

SweepResult sweep(const ModelSpec& base, const Payoff& payoff, SweepParam param, const std::vector<double>& values);

std::string to_csv(const SweepResult& result);

Trend classify_trend(const std::vector<double>& values, double tol = 0.0);

}  // namespace levystop
