#pragma once

#include <span>
#include <string>
#include <vector>

#include "levystop/charroots.hpp"
#include "levystop/model.hpp"
#include "levystop/stopping.hpp"

namespace levystop {

struct SandwichRow {
    double x;
    double v_low;   ///< jump-free value discounted at r + lambda
    double v;       ///< jump-diffusion value
    double v_high;  ///< jump-free value discounted at r
};

struct SandwichReport {
    RootResult root;
    ThresholdSolution solution;  ///< jump model
    double k_low = 0.0;          ///< continuous root at r
    double k_high = 0.0;         ///< continuous root at r + lambda
    double x_star_low = 0.0;     ///< threshold of the r + lambda problem
    double x_star_high = 0.0;    ///< threshold of the r problem
    double theta_star = 0.0;
    double mu_tilde = 0.0;
    std::vector<SandwichRow> grid_values;
};

/// 200 points from x0 - 5 (arithmetic) or x0 / 2 (geometric) to 1.5 x*_r.
std::vector<double> default_grid(const ValidatedModel& model, const Payoff& payoff);

/// Evaluates the three value functions and asserts their ordering.
SandwichReport sandwich(const ValidatedModel& model, const Payoff& payoff, std::span<const double> grid);
SandwichReport sandwich(const ValidatedModel& model, const Payoff& payoff);

/// Jump-risk-adjusted discount rate: r + lambda (1 - E[transform at k1]).
double adjusted_discount(const ValidatedModel& model, double k1);

/// Drift (per unit state for the geometric family) of the continuous
/// diffusion whose (r + lambda)-discounted threshold equals x*.
double adjusted_drift(const ValidatedModel& model, double k1);

/// Certainty-equivalent growth rate r psi / psi': r / k1 or r x / k1.
double certainty_growth(const ValidatedModel& model, double k1, double x);

/// Time at which the deterministic flow with growth certainty_growth
/// reaches x*; zero when x >= x*.
double certainty_time(const ValidatedModel& model, double k1, double x, double x_star);

/// Closed-form solution of X' = certainty_growth(X), X(0) = x.
double certainty_flow(const ValidatedModel& model, double k1, double x, double t);

std::string to_csv(const SandwichReport& report);

}  // namespace levystop
