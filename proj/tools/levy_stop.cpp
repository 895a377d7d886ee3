// levy-stop: command-line front end for the levystop library.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "levystop/bounds.hpp"
#include "levystop/charroots.hpp"
#include "levystop/error.hpp"
#include "levystop/io.hpp"
#include "levystop/mc_oracle.hpp"
#include "levystop/reproduce.hpp"
#include "levystop/stopping.hpp"

namespace {

using namespace levystop;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitStatistical = 4;

struct GridArg {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    std::vector<double> points() const {
        if (n == 1) return {lo};
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
        return out;
    }
};

GridArg parse_grid(const std::string& text) {
    GridArg g;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || g.n < 1 || !(g.hi >= g.lo) ||
        !in.eof())
        throw Error(ErrorCode::ConfigError, "grid must look like lo:hi:n with lo <= hi and n >= 1");
    return g;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + out_path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct PayoffOverride {
    std::string kind;
    double K = std::nan("");
    double I = std::nan("");
    double a = 1.0;
    double b = 1.0;
};

Payoff resolve_payoff(const Config& cfg, const PayoffOverride& ov) {
    if (ov.kind == "capped") {
        if (std::isnan(ov.K) || std::isnan(ov.I)) throw Error(ErrorCode::ConfigError, "--payoff capped needs --K and --I");
        return payoffs::CappedCall{ov.K, ov.I};
    }
    if (ov.kind == "power") return payoffs::PowerCall{ov.a, ov.b, std::isnan(ov.K) ? 1.0 : ov.K};
    if (!ov.kind.empty()) throw Error(ErrorCode::ConfigError, "--payoff must be 'capped' or 'power'");
    if (!cfg.payoff) throw Error(ErrorCode::ConfigError, "config has no payoff; pass --payoff");
    return *cfg.payoff;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal stopping thresholds for spectrally negative jump diffusions"};
    app.name("levy-stop");
    app.require_subcommand(1);

    std::string config_path, out_path;

    auto* validate_cmd = app.add_subcommand("validate", "Validate a model config and echo it normalized");
    validate_cmd->add_option("--config", config_path, "Model JSON")->required();

    auto* root_cmd = app.add_subcommand("root", "Solve the characteristic equation for k1");
    root_cmd->add_option("--config", config_path, "Model JSON")->required();
    root_cmd->add_option("--out", out_path, "Write output here instead of stdout");

    PayoffOverride payoff_override;
    std::string grid_text, format = "json";
    auto* solve_cmd = app.add_subcommand("solve", "Optimal threshold, value and sandwich bounds");
    solve_cmd->add_option("--config", config_path, "Model JSON")->required();
    solve_cmd->add_option("--payoff", payoff_override.kind, "Override payoff: capped | power");
    solve_cmd->add_option("--K", payoff_override.K, "Cap (capped) or strike (power)");
    solve_cmd->add_option("--I", payoff_override.I, "Investment cost of the capped call");
    solve_cmd->add_option("--a", payoff_override.a, "Power call scale");
    solve_cmd->add_option("--b", payoff_override.b, "Power call exponent");
    solve_cmd->add_option("--grid", grid_text, "Evaluation grid lo:hi:n");
    solve_cmd->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    solve_cmd->add_option("--out", out_path, "Write output here instead of stdout");

    std::string target_name, precision = "rounded";
    auto* reproduce_cmd = app.add_subcommand("reproduce", "Emit built-in table or figure data as CSV");
    reproduce_cmd->add_option("target", target_name, "table1|table2|table3|figure1|figure2|figure3")->required();
    reproduce_cmd->add_option("--precision", precision, "rounded | full")->check(CLI::IsMember({"rounded", "full"}));
    reproduce_cmd->add_option("--out", out_path, "Write output here instead of stdout");

    std::string sweep_param, range_text;
    auto* sweep_cmd = app.add_subcommand("sweep", "Comparative statics in sigma or lambda");
    sweep_cmd->add_option("--config", config_path, "Model JSON")->required();
    sweep_cmd->add_option("--param", sweep_param, "sigma | lambda")->required()->check(CLI::IsMember({"sigma", "lambda"}));
    sweep_cmd->add_option("--range", range_text, "lo:hi:n")->required();
    sweep_cmd->add_option("--payoff", payoff_override.kind, "Override payoff: capped | power");
    sweep_cmd->add_option("--K", payoff_override.K, "Cap (capped) or strike (power)");
    sweep_cmd->add_option("--I", payoff_override.I, "Investment cost of the capped call");
    sweep_cmd->add_option("--a", payoff_override.a, "Power call scale");
    sweep_cmd->add_option("--b", payoff_override.b, "Power call exponent");
    sweep_cmd->add_option("--out", out_path, "Write output here instead of stdout");

    double sim_x = 0.0, sim_y = 0.0;
    McConfig mc;
    bool policy = false, assert_contract = false;
    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo first-passage check against the analytic value");
    simulate_cmd->add_option("--config", config_path, "Model JSON")->required();
    simulate_cmd->add_option("--x", sim_x, "Initial state")->required();
    auto* y_opt = simulate_cmd->add_option("--y", sim_y, "Threshold");
    auto* grid_opt = simulate_cmd->add_option("--grid", grid_text, "Threshold grid lo:hi:n (grid search)");
    y_opt->excludes(grid_opt);
    simulate_cmd->add_option("--n", mc.n_paths, "Paths")->capture_default_str();
    simulate_cmd->add_option("--seed", mc.seed, "Master seed")->capture_default_str();
    simulate_cmd->add_option("--threads", mc.threads, "Worker threads (0 = all cores)");
    simulate_cmd->add_option("--horizon", mc.horizon, "Simulation horizon (default ln(1e4)/r)");
    simulate_cmd->add_option("--step", mc.step, "Bridge refinement step")->capture_default_str();
    simulate_cmd->add_flag("--policy", policy, "Estimate the policy value instead of the Laplace transform");
    simulate_cmd->add_flag("--assert", assert_contract, "Exit 4 when the statistical contract fails");
    simulate_cmd->add_option("--out", out_path, "Write output here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*validate_cmd) {
            Config cfg = load_config(config_path);
            validate(cfg.model, Purpose::HittingProbability);
            if (cfg.payoff) validate_payoff(*cfg.payoff, cfg.model.dynamics.family);
            emit(dump(to_json(cfg)), "");
            return 0;
        }
        if (*root_cmd) {
            const Config cfg = load_config(config_path);
            const ValidatedModel model = validate(cfg.model);
            emit(dump(to_json(solve_k1(model))), out_path);
            return 0;
        }
        if (*solve_cmd) {
            const Config cfg = load_config(config_path);
            const ValidatedModel model = validate(cfg.model);
            const Payoff payoff = resolve_payoff(cfg, payoff_override);
            validate_payoff(payoff, model.family());
            const auto grid = grid_text.empty() ? default_grid(model, payoff) : parse_grid(grid_text).points();
            const SandwichReport rep = sandwich(model, payoff, grid);
            if (format == "csv") {
                emit(to_csv(rep), out_path);
                return 0;
            }
            json j = to_json(rep);
            j["model"] = to_json(cfg.model);
            j["payoff"] = to_json(payoff);
            j["break_even"] = break_even(payoff);
            j["unchecked_hypotheses"] = json::array(
                {"jumps from above x* overshoot below the break-even point with positive probability"});
            emit(dump(j), out_path);
            return 0;
        }
        if (*reproduce_cmd) {
            const auto target = parse_target(target_name);
            if (!target) throw Error(ErrorCode::ConfigError, "unknown reproduce target '" + target_name + "'");
            emit(to_csv(reproduce(*target), precision == "full" ? Precision::Full : Precision::Rounded), out_path);
            return 0;
        }
        if (*sweep_cmd) {
            const Config cfg = load_config(config_path);
            validate(cfg.model);
            const Payoff payoff = resolve_payoff(cfg, payoff_override);
            const auto values = parse_grid(range_text).points();
            const SweepResult res =
                sweep(cfg.model, payoff, sweep_param == "sigma" ? SweepParam::Sigma : SweepParam::Lambda, values);
            emit(to_csv(res), out_path);
            return 0;
        }
        if (*simulate_cmd) {
            const Config cfg = load_config(config_path);
            const ValidatedModel model = validate(cfg.model);
            const double k1 = solve_k1(model).k1;
            auto ratio = [&](double x, double y) {
                return x >= y ? 1.0 : std::exp(log_psi(model.family(), k1, x) - log_psi(model.family(), k1, y));
            };
            if (!grid_text.empty()) {
                if (!cfg.payoff) throw Error(ErrorCode::ConfigError, "grid search needs a payoff in the config");
                const Payoff& payoff = *cfg.payoff;
                validate_payoff(payoff, model.family());
                const auto grid = parse_grid(grid_text).points();
                const GridSearchResult res = threshold_grid_search(model, payoff, sim_x, grid, mc);
                const double x_star = solve_threshold(model, payoff, k1).x_star;
                double spacing = 0.0;
                for (std::size_t i = 1; i < grid.size(); ++i) spacing = std::max(spacing, grid[i] - grid[i - 1]);
                const bool near = std::abs(res.best_y - x_star) <= spacing + 1e-12;
                json values = json::array();
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    const double target = sim_x >= grid[j] ? payoff_eval(payoff, sim_x)
                                                          : payoff_eval(payoff, grid[j]) * ratio(sim_x, grid[j]);
                    json row = report_json(res.values[j], target);
                    row["y"] = grid[j];
                    row["gap_to_best"] = {{"mean", res.gap_to_best[j].mean}, {"stderr", res.gap_to_best[j].std_error}};
                    values.push_back(row);
                }
                emit(dump(json{{"best_y", res.best_y},
                               {"analytic_x_star", x_star},
                               {"within_one_step", near},
                               {"values", values}}),
                     out_path);
                return assert_contract && !near ? kExitStatistical : 0;
            }
            if (y_opt->count() == 0) throw Error(ErrorCode::ConfigError, "simulate needs --y or --grid");
            MCEstimate est;
            double target = 0.0;
            if (policy) {
                if (!cfg.payoff) throw Error(ErrorCode::ConfigError, "--policy needs a payoff in the config");
                est = policy_value(model, *cfg.payoff, sim_x, sim_y, mc);
                target = sim_x >= sim_y ? payoff_eval(*cfg.payoff, sim_x)
                                        : payoff_eval(*cfg.payoff, sim_y) * ratio(sim_x, sim_y);
            } else {
                est = estimate_laplace(model, sim_x, sim_y, mc);
                target = ratio(sim_x, sim_y);
            }
            json j = report_json(est, target);
            j["quantity"] = policy ? "policy_value" : "laplace_transform";
            j["within_contract"] = within_contract(est, target);
            emit(dump(j), out_path);
            return assert_contract && !within_contract(est, target) ? kExitStatistical : 0;
        }
    } catch (const Error& e) {
        std::cerr << "levy-stop: " << e.what() << "\n";
        return is_validation_error(e.code()) ? kExitValidation : kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "levy-stop: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
