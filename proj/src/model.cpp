#include "levystop/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "levystop/error.hpp"
#include "levystop/transforms.hpp"

namespace levystop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void check_jump_parameters(const JumpDistribution& dist) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::BadJumpParameters, what); };
    std::visit(overloaded{
                   [&](const jumps::GammaLaw& g) {
                       if (!positive_finite(g.shape) || !positive_finite(g.rate))
                           fail("gamma law needs shape > 0 and rate > 0");
                   },
                   [&](const jumps::BetaLaw& b) {
                       if (!positive_finite(b.c) || !positive_finite(b.d)) fail("beta law needs c > 0 and d > 0");
                   },
                   [&](const jumps::ExponentialLaw& e) {
                       if (!positive_finite(e.rate)) fail("exponential law needs rate > 0");
                   },
                   [&](const jumps::PointMass& p) {
                       if (!positive_finite(p.z)) fail("point mass must sit at a positive jump size");
                   },
                   [&](const jumps::Tabulated& t) {
                       if (t.nodes.empty() || t.nodes.size() != t.weights.size())
                           fail("tabulated law needs equally many nodes and weights");
                       double total = 0.0;
                       for (std::size_t i = 0; i < t.nodes.size(); ++i) {
                           if (!positive_finite(t.nodes[i])) fail("tabulated nodes must be positive and finite");
                           if (!std::isfinite(t.weights[i]) || t.weights[i] < 0.0)
                               fail("tabulated weights must be nonnegative");
                           total += t.weights[i];
                       }
                       if (std::abs(total - 1.0) > 1e-9) fail("tabulated weights must sum to 1");
                   },
               },
               dist);
}

}  // namespace

Interval support(const JumpDistribution& dist) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [](const jumps::GammaLaw&) { return Interval{0.0, inf}; },
                          [](const jumps::BetaLaw&) { return Interval{0.0, 1.0}; },
                          [](const jumps::ExponentialLaw&) { return Interval{0.0, inf}; },
                          [](const jumps::PointMass& p) { return Interval{p.z, p.z}; },
                          [](const jumps::Tabulated& t) {
                              auto [lo, hi] = std::minmax_element(t.nodes.begin(), t.nodes.end());
                              return Interval{*lo, *hi};
                          },
                      },
                      dist);
}

double ValidatedModel::jump_scale() const noexcept {
    return family() == Family::Arithmetic ? spec_.dynamics.jump_scale : 1.0;
}

ValidatedModel ValidatedModel::with_volatility(double sigma) const {
    ModelSpec s = spec_;
    s.dynamics.volatility = sigma;
    return validate(std::move(s), purpose_);
}

ValidatedModel ValidatedModel::with_lambda(double lambda) const {
    ModelSpec s = spec_;
    s.jump_intensity = lambda;
    return validate(std::move(s), purpose_);
}

ValidatedModel ValidatedModel::with_discount(double r) const {
    ModelSpec s = spec_;
    s.discount = r;
    return validate(std::move(s), purpose_);
}

ValidatedModel validate(ModelSpec spec, Purpose purpose) {
    const auto& dyn = spec.dynamics;
    if (!std::isfinite(dyn.volatility) || dyn.volatility <= 0.0)
        throw Error(ErrorCode::NonPositiveVolatility, "volatility must be strictly positive");
    if (!std::isfinite(dyn.drift)) throw Error(ErrorCode::InvalidArgument, "drift must be finite");
    if (!std::isfinite(spec.jump_intensity) || spec.jump_intensity < 0.0)
        throw Error(ErrorCode::NegativeParameter, "jump intensity lambda must be >= 0");
    if (!std::isfinite(spec.discount) || spec.discount < 0.0)
        throw Error(ErrorCode::NegativeParameter, "discount rate r must be >= 0");
    if (dyn.family == Family::Arithmetic && (!std::isfinite(dyn.jump_scale) || dyn.jump_scale < 0.0))
        throw Error(ErrorCode::NegativeParameter, "jump scale gamma must be >= 0");

    check_jump_parameters(spec.jump_dist);
    const Interval supp = support(spec.jump_dist);
    if (dyn.family == Family::Geometric && !(supp.lo > 0.0 && supp.hi < 1.0)) {
        // Beta has closed support [0, 1] but puts no mass on the endpoints.
        if (!std::holds_alternative<jumps::BetaLaw>(spec.jump_dist))
            throw Error(ErrorCode::BadJumpSupport, "geometric jump sizes must lie in (0, 1)");
    }

    if (purpose == Purpose::Threshold && spec.discount <= 0.0)
        throw Error(ErrorCode::ZeroDiscountForThreshold, "threshold problems need r > 0");

    const double mbar = mean_jump(spec.jump_dist);
    if (!positive_finite(mbar)) throw Error(ErrorCode::BadJumpParameters, "mean jump must be finite and positive");
    return ValidatedModel(std::move(spec), purpose, mbar);
}

// ---------------------------------------------------------------------------
// Payoffs

namespace {

double cubic(const std::array<double, 4>& c, double u) { return c[0] + u * (c[1] + u * (c[2] + u * c[3])); }
double cubic_deriv(const std::array<double, 4>& c, double u) { return c[1] + u * (2.0 * c[2] + u * 3.0 * c[3]); }

// Segment index i with breakpoints[i] <= x < breakpoints[i+1]; -1 below the
// table, n-1 at or above the last breakpoint.
long segment_of(const payoffs::Tabulated& t, double x) {
    const auto& b = t.breakpoints;
    if (x < b.front()) return -1;
    auto it = std::upper_bound(b.begin(), b.end(), x);
    return static_cast<long>(it - b.begin()) - 1;
}

double tabulated_eval(const payoffs::Tabulated& t, double x) {
    const auto& b = t.breakpoints;
    const long n = static_cast<long>(b.size());
    if (x <= b.front()) return t.coefficients.front()[0];
    if (x >= b.back()) return cubic(t.coefficients.back(), b.back() - b[n - 2]);
    const long i = segment_of(t, x);
    return cubic(t.coefficients[i], x - b[i]);
}

double tabulated_deriv(const payoffs::Tabulated& t, double x, Side side) {
    const auto& b = t.breakpoints;
    const long n = static_cast<long>(b.size());
    // segment whose closure supplies the requested one-sided derivative
    long i = segment_of(t, x);
    if (side == Side::Left && i >= 0 && i < n && x == b[i]) --i;
    if (i < 0 || i >= n - 1) return 0.0;
    return cubic_deriv(t.coefficients[i], x - b[i]);
}

void validate_tabulated(const payoffs::Tabulated& t) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::BadPayoff, what); };
    const auto& b = t.breakpoints;
    if (b.size() < 2) fail("tabulated payoff needs at least 2 breakpoints");
    if (b.size() > kMaxTabulatedBreakpoints) fail("tabulated payoff is capped at 64 breakpoints");
    if (t.coefficients.size() != b.size() - 1) fail("tabulated payoff needs one coefficient row per segment");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i])) fail("breakpoints must be finite");
        if (i > 0 && !(b[i] > b[i - 1])) fail("breakpoints must be strictly increasing");
    }
    for (std::size_t i = 0; i < t.coefficients.size(); ++i) {
        const auto& c = t.coefficients[i];
        for (double v : c)
            if (!std::isfinite(v)) fail("coefficients must be finite");
        const double h = b[i + 1] - b[i];
        if (i + 1 < t.coefficients.size()) {
            const double end = cubic(c, h);
            const double next = t.coefficients[i + 1][0];
            if (std::abs(end - next) > 1e-9 * std::max(1.0, std::abs(next)))
                fail("tabulated payoff must be continuous at breakpoint " + std::to_string(b[i + 1]));
        }
        // g' is a quadratic on the segment; its minimum sits at an end or at the vertex.
        double min_slope = std::min(cubic_deriv(c, 0.0), cubic_deriv(c, h));
        if (c[3] != 0.0) {
            const double vertex = -c[2] / (3.0 * c[3]);
            if (vertex > 0.0 && vertex < h) min_slope = std::min(min_slope, cubic_deriv(c, vertex));
        }
        if (min_slope < -1e-12) fail("tabulated payoff must be nondecreasing (segment " + std::to_string(i) + ")");
    }
}

}  // namespace

void validate_payoff(const Payoff& payoff, Family family) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::BadPayoff, what); };
    std::visit(overloaded{
                   [&](const payoffs::CappedCall& p) {
                       if (!(std::isfinite(p.K) && std::isfinite(p.I) && p.K > p.I && p.I > 0.0))
                           fail("capped call needs K > I > 0");
                   },
                   [&](const payoffs::PowerCall& p) {
                       if (!(positive_finite(p.a) && positive_finite(p.K) && p.b > 0.0 && p.b <= 1.0))
                           fail("power call needs a > 0, b in (0, 1], K > 0");
                   },
                   [&](const payoffs::Tabulated& t) { validate_tabulated(t); },
               },
               payoff);
    double x0 = 0.0;
    try {
        x0 = break_even(payoff);
    } catch (const Error& e) {
        throw Error(ErrorCode::BadPayoff, e.what());
    }
    if (family == Family::Geometric && x0 <= 0.0) fail("break-even point must be positive for geometric dynamics");
}

double payoff_eval(const Payoff& payoff, double x) {
    return std::visit(overloaded{
                          [x](const payoffs::CappedCall& p) { return std::max(std::min(p.K, x) - p.I, 0.0); },
                          [x](const payoffs::PowerCall& p) {
                              if (x <= 0.0) return 0.0;
                              return std::max(p.a * std::pow(x, p.b) - p.K, 0.0);
                          },
                          [x](const payoffs::Tabulated& t) { return tabulated_eval(t, x); },
                      },
                      payoff);
}

double payoff_deriv(const Payoff& payoff, double x, Side side) {
    return std::visit(overloaded{
                          [=](const payoffs::CappedCall& p) {
                              const bool inside = side == Side::Right ? (x >= p.I && x < p.K) : (x > p.I && x <= p.K);
                              return inside ? 1.0 : 0.0;
                          },
                          [=](const payoffs::PowerCall& p) {
                              const double x0 = std::pow(p.K / p.a, 1.0 / p.b);
                              const bool active = side == Side::Right ? x >= x0 : x > x0;
                              return active ? p.a * p.b * std::pow(x, p.b - 1.0) : 0.0;
                          },
                          [=](const payoffs::Tabulated& t) { return tabulated_deriv(t, x, side); },
                      },
                      payoff);
}

std::vector<double> payoff_kinks(const Payoff& payoff) {
    return std::visit(overloaded{
                          [](const payoffs::CappedCall& p) { return std::vector<double>{p.I, p.K}; },
                          [](const payoffs::PowerCall& p) {
                              return std::vector<double>{std::pow(p.K / p.a, 1.0 / p.b)};
                          },
                          [&](const payoffs::Tabulated& t) {
                              std::vector<double> out;
                              for (double b : t.breakpoints) {
                                  const double l = tabulated_deriv(t, b, Side::Left);
                                  const double r = tabulated_deriv(t, b, Side::Right);
                                  if (std::abs(l - r) > 1e-12 * std::max(1.0, std::abs(l) + std::abs(r)))
                                      out.push_back(b);
                              }
                              return out;
                          },
                      },
                      payoff);
}

bool is_kink(const Payoff& payoff, double x) {
    const auto kinks = payoff_kinks(payoff);
    return std::find(kinks.begin(), kinks.end(), x) != kinks.end();
}

double break_even(const Payoff& payoff) {
    return std::visit(overloaded{
                          [](const payoffs::CappedCall& p) { return p.I; },
                          [](const payoffs::PowerCall& p) { return std::pow(p.K / p.a, 1.0 / p.b); },
                          [&](const payoffs::Tabulated& t) {
                              const auto& b = t.breakpoints;
                              if (tabulated_eval(t, b.front()) > 0.0)
                                  throw Error(ErrorCode::NoBreakEven, "tabulated payoff is positive everywhere");
                              if (tabulated_eval(t, b.back()) <= 0.0)
                                  throw Error(ErrorCode::NoBreakEven, "tabulated payoff is never positive");
                              std::size_t i = 0;
                              while (tabulated_eval(t, b[i + 1]) <= 0.0) ++i;
                              // g(lo) <= 0 < g(hi)
                              double lo = b[i], hi = b[i + 1];
                              for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
                                  const double mid = 0.5 * (lo + hi);
                                  if (mid <= lo || mid >= hi) break;
                                  (tabulated_eval(t, mid) > 0.0 ? hi : lo) = mid;
                              }
                              return hi;
                          },
                      },
                      payoff);
}

}  // namespace levystop
