#include "levystop/reproduce.hpp"

#include <cmath>
#include <sstream>

#include "levystop/bounds.hpp"
#include "levystop/charroots.hpp"
#include "levystop/io.hpp"
#include "levystop/stopping.hpp"

namespace levystop {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

const std::vector<double> kTableSigmas{0.05, 0.1, 0.15, 0.2, 0.25};
const std::vector<double> kTableLambdas{0.0, 0.1, 0.2};

ModelSpec geometric_beta(double alpha, double r, double lambda, double sigma, double c, double d) {
    ModelSpec s;
    s.dynamics = {Family::Geometric, alpha, sigma, 1.0};
    s.jump_intensity = lambda;
    s.jump_dist = jumps::BetaLaw{c, d};
    s.discount = r;
    return s;
}

ModelSpec with_sigma(ModelSpec s, double sigma) {
    s.dynamics.volatility = sigma;
    return s;
}

DataTable multiplier_figure() {
    const ModelSpec base = figure2_model();
    const auto power = std::get<payoffs::PowerCall>(figure2_payoff());
    DataTable t;
    t.header = {"sigma", "P", "P_r_plus_lambda", "P_r"};
    for (double sigma : linspace(0.01, 0.5, 50)) {
        const ValidatedModel m = validate(with_sigma(base, sigma));
        const double k1 = solve_k1(m).k1;
        const double k_r = continuous_root(m, m.discount());
        const double k_rl = continuous_root(m, m.discount() + m.lambda());
        auto mult = [&](double k) { return k / (k - power.b); };
        t.rows.push_back({sigma, mult(k1), mult(k_rl), mult(k_r)});
    }
    return t;
}

DataTable value_figure() {
    const ValidatedModel m = validate(figure2_model());
    const Payoff payoff = figure2_payoff();
    const SandwichReport rep = sandwich(m, payoff, linspace(0.025, 3.5, 140));
    DataTable t;
    t.header = {"x", "g", "V", "V_r", "V_r_plus_lambda"};
    for (const auto& row : rep.grid_values) t.rows.push_back({row.x, payoff_eval(payoff, row.x), row.v, row.v_high, row.v_low});
    return t;
}

DataTable threshold_figure() {
    const ModelSpec base = figure3_model();
    const Payoff payoff = figure3_payoff();
    DataTable t;
    t.header = {"sigma", "x_star", "x_star_r_plus_lambda", "x_star_r"};
    for (double sigma : linspace(0.01, 0.5, 50)) {
        const ValidatedModel m = validate(with_sigma(base, sigma));
        const SandwichReport rep = sandwich(m, payoff, std::vector<double>{});
        t.rows.push_back({sigma, rep.solution.x_star, rep.x_star_low, rep.x_star_high});
    }
    return t;
}

}  // namespace

std::optional<Target> parse_target(std::string_view name) {
    if (name == "table1") return Target::Table1;
    if (name == "table2") return Target::Table2;
    if (name == "table3") return Target::Table3;
    if (name == "figure1") return Target::Figure1;
    if (name == "figure2") return Target::Figure2;
    if (name == "figure3") return Target::Figure3;
    return std::nullopt;
}

ModelSpec table1_model() {
    ModelSpec s;
    s.dynamics = {Family::Arithmetic, 0.04, 0.05, 1.0};
    s.jump_intensity = 0.0;
    s.jump_dist = jumps::GammaLaw{1.0, 1.0};
    s.discount = 0.05;
    return s;
}

ModelSpec table2_model() { return geometric_beta(0.03, 0.05, 0.0, 0.05, 1.25, 5.0); }
ModelSpec table3_model() { return geometric_beta(0.05, 0.03, 0.0, 0.05, 1.25, 5.0); }
ModelSpec figure2_model() { return geometric_beta(0.025, 0.05, 0.02, 0.1, 1.25, 5.0); }
ModelSpec figure3_model() { return geometric_beta(0.04, 0.02, 0.01, 0.1, 1.25, 2.0); }
Payoff figure2_payoff() { return payoffs::PowerCall{1.0, 1.0, 1.0}; }
Payoff figure3_payoff() { return payoffs::PowerCall{1.0, 0.2, 1.0}; }

DataTable growth_table(const ModelSpec& base, const std::vector<double>& sigmas, const std::vector<double>& lambdas) {
    DataTable t;
    t.percent = true;
    t.header.push_back("lambda");
    for (double s : sigmas) t.header.push_back("sigma_" + format_general(s, 15));
    for (double lambda : lambdas) {
        std::vector<double> row{lambda};
        for (double sigma : sigmas) {
            ModelSpec spec = with_sigma(base, sigma);
            spec.jump_intensity = lambda;
            const ValidatedModel m = validate(std::move(spec));
            const double k1 = solve_k1(m).k1;
            row.push_back(100.0 * (m.discount() / k1 - m.drift()));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

DataTable reproduce(Target target) {
    switch (target) {
        case Target::Table1: return growth_table(table1_model(), kTableSigmas, kTableLambdas);
        case Target::Table2: return growth_table(table2_model(), kTableSigmas, kTableLambdas);
        case Target::Table3: return growth_table(table3_model(), kTableSigmas, kTableLambdas);
        case Target::Figure1: return multiplier_figure();
        case Target::Figure2: return value_figure();
        case Target::Figure3: return threshold_figure();
    }
    return {};
}

std::string to_csv(const DataTable& table, Precision precision) {
    std::ostringstream out;
    out << csv_row(table.header);
    for (const auto& row : table.rows) {
        std::vector<std::string> fields;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == 0)
                fields.push_back(format_general(row[i], 15));
            else if (precision == Precision::Full)
                fields.push_back(format_general(row[i], 17));
            else
                fields.push_back(format_fixed(row[i], table.percent ? 2 : 6));
        }
        out << csv_row(fields);
    }
    return out.str();
}

std::string_view to_string(Trend trend) noexcept {
    switch (trend) {
        case Trend::StrictlyIncreasing: return "strictly_increasing";
        case Trend::StrictlyDecreasing: return "strictly_decreasing";
        case Trend::Nondecreasing: return "nondecreasing";
        case Trend::Nonincreasing: return "nonincreasing";
        case Trend::Constant: return "constant";
        case Trend::Mixed: return "mixed";
    }
    return "mixed";
}

Trend classify_trend(const std::vector<double>& values, double tol) {
    bool all_up = true, all_down = true, all_flat = true, none_down = true, none_up = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[i - 1];
        all_up = all_up && d > tol;
        all_down = all_down && d < -tol;
        all_flat = all_flat && std::abs(d) <= tol;
        none_down = none_down && d >= -tol;
        none_up = none_up && d <= tol;
    }
    if (all_flat) return Trend::Constant;
    if (all_up) return Trend::StrictlyIncreasing;
    if (all_down) return Trend::StrictlyDecreasing;
    if (none_down) return Trend::Nondecreasing;
    if (none_up) return Trend::Nonincreasing;
    return Trend::Mixed;
}

SweepResult sweep(const ModelSpec& base, const Payoff& payoff, SweepParam param, const std::vector<double>& values) {
    SweepResult out;
    out.param = param;
    std::vector<double> k1s, xs;
    bool any_convex = false, any_concave = false;
    for (double v : values) {
        ModelSpec spec = base;
        (param == SweepParam::Sigma ? spec.dynamics.volatility : spec.jump_intensity) = v;
        const ValidatedModel m = validate(std::move(spec));
        const double k1 = solve_k1(m).k1;
        const ThresholdSolution sol = solve_threshold(m, payoff, k1);
        out.rows.push_back({v, k1, sol.x_star, adjusted_discount(m, k1), m.discount() / k1});
        k1s.push_back(k1);
        xs.push_back(sol.x_star);
        const bool convex = m.family() == Family::Arithmetic || k1 > 1.0;
        (convex ? any_convex : any_concave) = true;
    }
    out.regime = any_convex && any_concave ? "mixed" : (any_concave ? "concave" : "convex");
    out.k1_expected = out.regime == "convex"    ? Trend::StrictlyDecreasing
                      : out.regime == "concave" ? Trend::StrictlyIncreasing
                                                : Trend::Mixed;
    out.k1_observed = classify_trend(k1s);
    out.x_star_observed = classify_trend(xs);
    out.k1_ok = out.k1_expected != Trend::Mixed && out.k1_observed == out.k1_expected;
    const Trend x = out.x_star_observed;
    if (out.k1_observed == Trend::StrictlyDecreasing)
        out.x_star_ok = x == Trend::StrictlyIncreasing || x == Trend::Nondecreasing || x == Trend::Constant;
    else if (out.k1_observed == Trend::StrictlyIncreasing)
        out.x_star_ok = x == Trend::StrictlyDecreasing || x == Trend::Nonincreasing || x == Trend::Constant;
    return out;
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << csv_row({result.param == SweepParam::Sigma ? "sigma" : "lambda", "k1", "x_star", "theta_star", "mu_hat"});
    for (const auto& r : result.rows)
        out << csv_row({format_general(r.param, 15), format_general(r.k1), format_general(r.x_star),
                        format_general(r.theta_star), format_general(r.mu_hat)});
    out << "# regime=" << result.regime << "\n";
    out << "# k1_expected=" << to_string(result.k1_expected) << "\n";
    out << "# k1_observed=" << to_string(result.k1_observed) << "\n";
    out << "# x_star_observed=" << to_string(result.x_star_observed) << "\n";
    out << "# monotonicity_ok=" << (result.k1_ok && result.x_star_ok ? "true" : "false") << "\n";
    return out.str();
}

}  // namespace levystop
