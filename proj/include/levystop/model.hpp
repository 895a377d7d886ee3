#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace levystop {

enum class Family { Arithmetic, Geometric };

/// Continuous part of the dynamics.
///
/// Arithmetic: dX = mu dt + sigma dW - gamma * Z (compensated), state space R.
/// Geometric:  dY = Y(alpha dt + sigma dW) - Y Z (compensated), state space
/// (0, inf) with jump sizes Z in (0, 1).
struct DynamicsSpec {
    Family family = Family::Arithmetic;
    double drift = 0.0;       ///< mu (arithmetic) or alpha (geometric)
    double volatility = 0.0;  ///< sigma > 0
    double jump_scale = 1.0;  ///< gamma >= 0; ignored for the geometric family
};

namespace jumps {
struct GammaLaw {
    double shape = 1.0;
    double rate = 1.0;
};
struct BetaLaw {
    double c = 1.0;
    double d = 1.0;
};
struct ExponentialLaw {
    double rate = 1.0;
};
struct PointMass {
    double z = 0.5;
};
/// Discrete law: P[Z = nodes[i]] = weights[i].
struct Tabulated {
    std::vector<double> nodes;
    std::vector<double> weights;
};
}  // namespace jumps

using JumpDistribution =
    std::variant<jumps::GammaLaw, jumps::BetaLaw, jumps::ExponentialLaw, jumps::PointMass, jumps::Tabulated>;

struct Interval {
    double lo;
    double hi;
};

/// Closed support of the jump-size law.
Interval support(const JumpDistribution& dist);

namespace payoffs {
/// g(x) = (min(K, x) - I)^+ with K > I > 0.
struct CappedCall {
    double K = 2.0;
    double I = 1.0;
};
/// g(x) = max(a x^b - K, 0) with a > 0, b in (0, 1], K > 0.
struct PowerCall {
    double a = 1.0;
    double b = 1.0;
    double K = 1.0;
};
/// Piecewise cubic: on [breakpoints[i], breakpoints[i+1]] the payoff is
/// c0 + c1 u + c2 u^2 + c3 u^3 with u = x - breakpoints[i]. Constant
/// extension outside the tabulated range.
struct Tabulated {
    std::vector<double> breakpoints;
    std::vector<std::array<double, 4>> coefficients;
};
}  // namespace payoffs

using Payoff = std::variant<payoffs::CappedCall, payoffs::PowerCall, payoffs::Tabulated>;

inline constexpr std::size_t kMaxTabulatedBreakpoints = 64;

struct ModelSpec {
    DynamicsSpec dynamics;
    double jump_intensity = 0.0;  ///< lambda >= 0
    JumpDistribution jump_dist = jumps::GammaLaw{};
    double discount = 0.05;       ///< r >= 0
};

enum class Purpose {
    Threshold,           ///< stopping problems, r > 0 required
    HittingProbability,  ///< r = 0 allowed
};

/// A ModelSpec whose invariants have been checked. Immutable; only
/// `validate` constructs one.
class ValidatedModel {
public:
    const ModelSpec& spec() const noexcept { return spec_; }
    Family family() const noexcept { return spec_.dynamics.family; }
    double drift() const noexcept { return spec_.dynamics.drift; }
    double volatility() const noexcept { return spec_.dynamics.volatility; }
    /// gamma for the arithmetic family, 1 for the geometric one.
    double jump_scale() const noexcept;
    double lambda() const noexcept { return spec_.jump_intensity; }
    double discount() const noexcept { return spec_.discount; }
    const JumpDistribution& jumps() const noexcept { return spec_.jump_dist; }
    double mean_jump() const noexcept { return mean_jump_; }
    Purpose purpose() const noexcept { return purpose_; }

    /// Copy with a different parameter, re-validated.
    ValidatedModel with_volatility(double sigma) const;
    ValidatedModel with_lambda(double lambda) const;
    ValidatedModel with_discount(double r) const;

private:
    friend ValidatedModel validate(ModelSpec spec, Purpose purpose);
    ValidatedModel(ModelSpec spec, Purpose purpose, double mean_jump)
        : spec_(std::move(spec)), purpose_(purpose), mean_jump_(mean_jump) {}

    ModelSpec spec_;
    Purpose purpose_;
    double mean_jump_;
};

/// Checks every ModelSpec invariant; throws Error naming the first violated one.
ValidatedModel validate(ModelSpec spec, Purpose purpose = Purpose::Threshold);

/// Throws BadPayoff unless the payoff is continuous, nondecreasing and has
/// a break-even point inside the family's state space.
void validate_payoff(const Payoff& payoff, Family family);

enum class Side { Left, Right };

double payoff_eval(const Payoff& payoff, double x);
double payoff_deriv(const Payoff& payoff, double x, Side side);

/// Points where the one-sided derivatives of g differ.
std::vector<double> payoff_kinks(const Payoff& payoff);
bool is_kink(const Payoff& payoff, double x);

/// x0 = inf{x : g(x) > 0}.
double break_even(const Payoff& payoff);

}  // namespace levystop
