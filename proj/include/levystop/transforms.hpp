#pragma once

#include "levystop/model.hpp"

namespace levystop {

// Jump-size transforms entering the characteristic equations. Closed forms
// where the law admits one, adaptive Gauss-Kronrod otherwise. The transform
// at argument 0 is exactly 1 for every law.

/// E[exp(-s Z)], s >= 0.
double laplace_transform(const JumpDistribution& dist, double s);

/// E[(1 - Z)^k], k >= 0. Requires support inside (0, 1).
double power_transform(const JumpDistribution& dist, double k);

/// E[Z].
double mean_jump(const JumpDistribution& dist);

/// E[ln(1 - Z)]. Requires support inside (0, 1).
double log_one_minus_mean(const JumpDistribution& dist);

// Quadrature route for the same quantities, bypassing every closed form.
// Discrete laws are summed exactly.
double laplace_transform_quadrature(const JumpDistribution& dist, double s);
double power_transform_quadrature(const JumpDistribution& dist, double k);
double log_one_minus_mean_quadrature(const JumpDistribution& dist);

/// Lebesgue density of a continuous law; throws InvalidArgument for atoms.
double jump_density(const JumpDistribution& dist, double z);

bool is_discrete(const JumpDistribution& dist) noexcept;

}  // namespace levystop
