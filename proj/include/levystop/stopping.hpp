#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levystop/model.hpp"

namespace levystop {

struct SmoothFit {
    bool smooth = true;
    double gap = 0.0;  ///< V'(x*-) - g'(x*+)
};

struct ThresholdSolution {
    Family family = Family::Arithmetic;
    Payoff payoff;
    double k1 = 0.0;
    double x_star = 0.0;
    double value_at_star = 0.0;        ///< g(x*)
    std::optional<double> multiplier;  ///< k1 / (k1 - b), power call on geometric dynamics
    bool kink_optimum = false;
    SmoothFit smooth_fit;
    std::vector<std::string> warnings;
};

/// Threshold x* = argmax g / psi for psi = exp(k1 x) or x^k1. Closed forms
/// for capped and power calls, numerical maximisation for tabulated payoffs.
ThresholdSolution solve_threshold(Family family, const Payoff& payoff, double k1);
ThresholdSolution solve_threshold(const ValidatedModel& model, const Payoff& payoff, double k1);

/// Generic route: grid scan + golden section + first-order refinement of
/// g / psi. Used for tabulated payoffs and as a cross-check of the closed forms.
ThresholdSolution solve_threshold_numeric(Family family, const Payoff& payoff, double k1);

/// V(x) = g(x) above x*, g(x*) psi(x) / psi(x*) below.
double value_fn(const ThresholdSolution& solution, double x);

/// One-sided derivative of V.
double value_deriv(const ThresholdSolution& solution, double x, Side side);

/// g' psi - g psi'. Positive below an interior x*, negative above.
double foc(Family family, const Payoff& payoff, double k1, double x);
double foc(const ValidatedModel& model, const Payoff& payoff, double k1, double x);

double smooth_fit_gap(const ThresholdSolution& solution, const Payoff& payoff);

/// Smallest scaled second difference of V on an n-point grid in [lo, hi];
/// nonnegative (up to rounding) when V is convex there.
double convexity_defect(const ThresholdSolution& solution, double lo, double hi, int n);

}  // namespace levystop
