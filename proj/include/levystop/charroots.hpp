#pragma once

#include "levystop/model.hpp"

namespace levystop {

struct RootResult {
    double k1 = 0.0;
    double bracket_low = 0.0;   ///< continuous root at theta = r
    double bracket_high = 0.0;  ///< continuous root at theta = r + lambda
    double residual = 0.0;      ///< char_eq(k1)
    int iterations = 0;
};

/// Positive root of the jump-free characteristic quadratic,
///   arithmetic: sigma^2 k^2 + 2 c k = 2 theta
///   geometric:  sigma^2 k (k - 1) + 2 c k = 2 theta
/// where c is the compensated drift. Strictly increasing in theta.
double continuous_root(Family family, double drift, double volatility, double theta);

/// Same, with c = mu + gamma lambda mbar (or alpha + lambda mbar) taken from the model.
double continuous_root(const ValidatedModel& model, double theta);

/// Drift of the associated continuous diffusion: mu + gamma lambda mbar or
/// alpha + lambda mbar.
double compensated_drift(const ValidatedModel& model);

/// Left-hand side of the characteristic equation at k >= 0.
double char_eq(const ValidatedModel& model, double k);

/// Largest absolute term of char_eq at k; sets the residual tolerance.
double char_eq_scale(const ValidatedModel& model, double k);

/// d/dk char_eq at k = 0 (the mean drift of X or of ln X).
double char_eq_slope_at_zero(const ValidatedModel& model);

/// Positive root k1 of the characteristic equation, bracketed by the
/// continuous roots at r and r + lambda.
RootResult solve_k1(const ValidatedModel& model);

struct PsiValue {
    double value;
    double first;
    double second;
};

/// psi(x) = exp(k x) (arithmetic) or x^k (geometric), with derivatives.
PsiValue psi(Family family, double k, double x);

/// log psi(x); finite wherever psi > 0.
double log_psi(Family family, double k, double x);

/// P_x[tau_y < inf] for x <= y, computed with r = 0.
double hitting_probability(const ValidatedModel& model, double x, double y);

}  // namespace levystop
