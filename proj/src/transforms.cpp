#include "levystop/transforms.hpp"

#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levystop/error.hpp"

namespace levystop {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kQuadTol = 1e-10;

double lbeta(double a, double b) {
    return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

// Integrand h(z, 1 - z); the complement is passed separately so that mass
// near z = 1 is not lost to rounding.
using PairFn = std::function<double(double, double)>;

// Adaptive Gauss-Kronrod on (0, 1) after the double-exponential change of
// variables z = (1 + tanh(pi/2 sinh t)) / 2. The substituted integrand decays
// doubly exponentially at both ends, which absorbs the algebraic endpoint
// singularities of Beta and Gamma densities with shape < 1.
double integrate_unit(const PairFn& f) {
    constexpr double half_pi = 1.5707963267948966;
    constexpr double t_max = 6.5;
    auto g = [&](double t) {
        const double s = half_pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(s));
        const double near = e / (1.0 + e);  // distance to the nearer endpoint
        if (!(near > 0.0)) return 0.0;
        const double z = t < 0.0 ? near : 1.0 - near;
        const double w = t < 0.0 ? 1.0 - near : near;
        const double jac = half_pi * std::cosh(t) * e / ((1.0 + e) * (1.0 + e)) * 2.0;
        const double v = f(z, w);
        return v == 0.0 ? 0.0 : v * jac;
    };
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -t_max, t_max, 15, kQuadTol, &err);
    if (!std::isfinite(value)) throw Error(ErrorCode::DivergentTransform, "quadrature did not converge");
    return value;
}

// Density evaluated from z and its complement w = 1 - z.
double density_pair(const JumpDistribution& dist, double z, double w) {
    if (const auto* b = std::get_if<jumps::BetaLaw>(&dist)) {
        if (z <= 0.0 || w <= 0.0) return 0.0;
        return std::exp((b->c - 1.0) * std::log(z) + (b->d - 1.0) * std::log(w) - lbeta(b->c, b->d));
    }
    return jump_density(dist, z);
}

double expect_continuous(const JumpDistribution& dist, const PairFn& h) {
    const Interval supp = support(dist);
    if (std::isinf(supp.hi)) {
        // z = u / (1 - u)
        return integrate_unit([&](double u, double v) {
            const double z = u / v;
            if (!std::isfinite(z)) return 0.0;
            const double dens = jump_density(dist, z);
            return dens == 0.0 ? 0.0 : h(z, 1.0 - z) * (dens / v / v);
        });
    }
    return integrate_unit([&](double z, double w) {
        const double dens = density_pair(dist, z, w);
        return dens == 0.0 ? 0.0 : h(z, w) * dens;
    });
}

double expect_discrete(const JumpDistribution& dist, const PairFn& h) {
    return std::visit(overloaded{
                          [&](const jumps::PointMass& p) { return h(p.z, 1.0 - p.z); },
                          [&](const jumps::Tabulated& t) {
                              double sum = 0.0, total = 0.0;
                              for (std::size_t i = 0; i < t.nodes.size(); ++i) {
                                  sum += t.weights[i] * h(t.nodes[i], 1.0 - t.nodes[i]);
                                  total += t.weights[i];
                              }
                              if (!(total > 0.0) || !std::isfinite(sum))
                                  throw Error(ErrorCode::DivergentTransform, "tabulated weights are degenerate");
                              return sum / total;
                          },
                          [](const auto&) -> double { throw Error(ErrorCode::InvalidArgument, "not a discrete law"); },
                      },
                      dist);
}

double expect(const JumpDistribution& dist, const PairFn& h) {
    return is_discrete(dist) ? expect_discrete(dist, h) : expect_continuous(dist, h);
}

void require_unit_support(const JumpDistribution& dist, const char* what) {
    const Interval supp = support(dist);
    const bool ok = std::holds_alternative<jumps::BetaLaw>(dist) || (supp.lo > 0.0 && supp.hi < 1.0);
    if (!ok) throw Error(ErrorCode::BadSupport, std::string(what) + " needs jump sizes in (0, 1)");
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be finite and >= 0");
}

}  // namespace

bool is_discrete(const JumpDistribution& dist) noexcept {
    return std::holds_alternative<jumps::PointMass>(dist) || std::holds_alternative<jumps::Tabulated>(dist);
}

double jump_density(const JumpDistribution& dist, double z) {
    return std::visit(overloaded{
                          [z](const jumps::GammaLaw& g) {
                              if (z <= 0.0) return 0.0;
                              return std::exp(g.shape * std::log(g.rate) + (g.shape - 1.0) * std::log(z) -
                                              g.rate * z - boost::math::lgamma(g.shape));
                          },
                          [z](const jumps::BetaLaw& b) {
                              if (z <= 0.0 || z >= 1.0) return 0.0;
                              return std::exp((b.c - 1.0) * std::log(z) + (b.d - 1.0) * std::log1p(-z) -
                                              lbeta(b.c, b.d));
                          },
                          [z](const jumps::ExponentialLaw& e) { return z < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * z); },
                          [](const auto&) -> double {
                              throw Error(ErrorCode::InvalidArgument, "discrete law has no density");
                          },
                      },
                      dist);
}

double laplace_transform(const JumpDistribution& dist, double s) {
    require_nonnegative(s, "laplace argument");
    if (s == 0.0) return 1.0;
    return std::visit(overloaded{
                          [s](const jumps::GammaLaw& g) { return std::exp(-g.shape * std::log1p(s / g.rate)); },
                          [s](const jumps::ExponentialLaw& e) { return e.rate / (e.rate + s); },
                          [s](const jumps::PointMass& p) { return std::exp(-s * p.z); },
                          [&](const auto&) { return laplace_transform_quadrature(dist, s); },
                      },
                      dist);
}

double power_transform(const JumpDistribution& dist, double k) {
    require_nonnegative(k, "power exponent");
    require_unit_support(dist, "power transform");
    if (k == 0.0) return 1.0;
    return std::visit(overloaded{
                          [k](const jumps::BetaLaw& b) { return std::exp(lbeta(b.c, b.d + k) - lbeta(b.c, b.d)); },
                          [k](const jumps::PointMass& p) { return std::pow(1.0 - p.z, k); },
                          [&](const auto&) { return power_transform_quadrature(dist, k); },
                      },
                      dist);
}

double mean_jump(const JumpDistribution& dist) {
    return std::visit(overloaded{
                          [](const jumps::GammaLaw& g) { return g.shape / g.rate; },
                          [](const jumps::BetaLaw& b) { return b.c / (b.c + b.d); },
                          [](const jumps::ExponentialLaw& e) { return 1.0 / e.rate; },
                          [](const jumps::PointMass& p) { return p.z; },
                          [&](const jumps::Tabulated&) { return expect_discrete(dist, [](double z, double) { return z; }); },
                      },
                      dist);
}

double log_one_minus_mean(const JumpDistribution& dist) {
    require_unit_support(dist, "log transform");
    return std::visit(overloaded{
                          [](const jumps::BetaLaw& b) {
                              return boost::math::digamma(b.d) - boost::math::digamma(b.c + b.d);
                          },
                          [](const jumps::PointMass& p) { return std::log1p(-p.z); },
                          [&](const auto&) { return log_one_minus_mean_quadrature(dist); },
                      },
                      dist);
}

double laplace_transform_quadrature(const JumpDistribution& dist, double s) {
    require_nonnegative(s, "laplace argument");
    return expect(dist, [s](double z, double) { return std::exp(-s * z); });
}

double power_transform_quadrature(const JumpDistribution& dist, double k) {
    require_nonnegative(k, "power exponent");
    require_unit_support(dist, "power transform");
    return expect(dist, [k](double, double w) { return std::pow(w, k); });
}

double log_one_minus_mean_quadrature(const JumpDistribution& dist) {
    require_unit_support(dist, "log transform");
    const double v = expect(dist, [](double, double w) { return std::log(w); });
    if (!std::isfinite(v)) throw Error(ErrorCode::DivergentTransform, "E[ln(1 - Z)] diverges");
    return v;
}

}  // namespace levystop
