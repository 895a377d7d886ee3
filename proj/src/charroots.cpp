#include "levystop/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levystop/error.hpp"
#include "levystop/transforms.hpp"

namespace levystop {

namespace {

constexpr double kRelTol = 1e-12;

double jump_transform(const ValidatedModel& model, double k) {
    if (model.family() == Family::Arithmetic) return laplace_transform(model.jumps(), model.jump_scale() * k);
    return power_transform(model.jumps(), k);
}

double residual_tolerance(const ValidatedModel& model, double k) {
    return kRelTol * std::max(1.0, char_eq_scale(model, k));
}

struct Bracketed {
    double root;
    double residual;
    int iterations;
};

// Safeguarded secant / bisection on [lo, hi] with f(lo) <= 0 <= f(hi).
template <class F>
Bracketed solve_bracketed(F&& f, double lo, double hi, double flo, double fhi, const ValidatedModel& model) {
    double a = lo, fa = flo, b = hi, fb = fhi;
    double best = std::abs(fa) <= std::abs(fb) ? a : b;
    double fbest = std::abs(fa) <= std::abs(fb) ? fa : fb;
    int it = 0;
    double width_before = b - a;
    for (; it < 400; ++it) {
        if (fa == 0.0) return {a, 0.0, it};
        if (fb == 0.0) return {b, 0.0, it};
        const double width = b - a;
        const bool narrow = width <= kRelTol * std::max(std::abs(a), std::abs(b));
        if (narrow && std::abs(fbest) <= residual_tolerance(model, best)) break;
        double x = b - fb * (b - a) / (fb - fa);
        // every third step, fall back to bisection unless the bracket has halved
        const bool stalled = (it % 3 == 2) && width > 0.5 * width_before;
        if (it % 3 == 2) width_before = width;
        if (!(x > a && x < b) || stalled) x = 0.5 * (a + b);
        if (x <= a || x >= b) break;  // adjacent doubles
        const double fx = f(x);
        if (std::abs(fx) < std::abs(fbest)) {
            best = x;
            fbest = fx;
        }
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    return {best, fbest, it};
}

}  // namespace

double continuous_root(Family family, double drift, double volatility, double theta) {
    if (!(theta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "discount rate theta must be >= 0");
    const double s2 = volatility * volatility;
    if (family == Family::Arithmetic) {
        const double sq = std::sqrt(drift * drift + 2.0 * theta * s2);
        return drift > 0.0 ? 2.0 * theta / (drift + sq) : (sq - drift) / s2;
    }
    const double beta = 0.5 - drift / s2;
    const double q = 2.0 * theta / s2;
    const double sq = std::sqrt(beta * beta + q);
    return beta >= 0.0 ? beta + sq : q / (sq - beta);
}

double compensated_drift(const ValidatedModel& model) {
    return model.drift() + model.jump_scale() * model.lambda() * model.mean_jump();
}

double continuous_root(const ValidatedModel& model, double theta) {
    return continuous_root(model.family(), compensated_drift(model), model.volatility(), theta);
}

double char_eq(const ValidatedModel& model, double k) {
    if (!(k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "characteristic equation needs k >= 0");
    const double s2 = model.volatility() * model.volatility();
    const double c = compensated_drift(model);
    const double lambda = model.lambda();
    const double quad = model.family() == Family::Arithmetic ? 0.5 * s2 * k * k : 0.5 * s2 * k * (k - 1.0);
    const double jumps = lambda > 0.0 ? lambda * jump_transform(model, k) : 0.0;
    return quad + c * k + jumps - (model.discount() + lambda);
}

double char_eq_scale(const ValidatedModel& model, double k) {
    const double s2 = model.volatility() * model.volatility();
    const double quad = model.family() == Family::Arithmetic ? 0.5 * s2 * k * k : 0.5 * s2 * k * std::abs(k - 1.0);
    return std::max({quad, std::abs(compensated_drift(model) * k), model.discount() + model.lambda()});
}

double char_eq_slope_at_zero(const ValidatedModel& model) {
    if (model.family() == Family::Arithmetic) return model.drift();
    const double s2 = model.volatility() * model.volatility();
    const double log_jump = model.lambda() > 0.0 ? model.lambda() * log_one_minus_mean(model.jumps()) : 0.0;
    return compensated_drift(model) - 0.5 * s2 + log_jump;
}

RootResult solve_k1(const ValidatedModel& model) {
    const double r = model.discount();
    const double lambda = model.lambda();
    auto f = [&](double k) { return char_eq(model, k); };

    if (r > 0.0) {
        RootResult out;
        out.bracket_low = continuous_root(model, r);
        out.bracket_high = continuous_root(model, r + lambda);
        if (lambda == 0.0) {
            out.k1 = out.bracket_low;
            out.residual = f(out.k1);
            return out;
        }
        const double flo = f(out.bracket_low);
        const double fhi = f(out.bracket_high);
        if (flo > residual_tolerance(model, out.bracket_low) || fhi < -residual_tolerance(model, out.bracket_high))
            throw Error(ErrorCode::BracketFailure, "characteristic equation has no sign change on [k_r, k_{r+lambda}]");
        const auto sol = solve_bracketed(f, out.bracket_low, out.bracket_high, std::min(flo, 0.0),
                                         std::max(fhi, 0.0), model);
        out.k1 = sol.root;
        out.residual = sol.residual;
        out.iterations = sol.iterations;
        return out;
    }

    // r = 0: k = 0 always solves the equation; a positive root exists only
    // when the mean drift (slope at 0) is negative.
    const double slope = char_eq_slope_at_zero(model);
    if (slope >= 0.0)
        throw Error(ErrorCode::NoPositiveRoot, "with r = 0 and nonnegative mean drift the increasing solution is constant");
    const double hi = continuous_root(model, lambda);
    if (!(hi > 0.0)) throw Error(ErrorCode::NoPositiveRoot, "no positive continuous root for r = 0");
    double lo = 0.5 * hi;
    double flo = f(lo);
    for (int i = 0; i < 200 && flo >= 0.0; ++i) {
        lo *= 0.5;
        flo = f(lo);
    }
    if (flo >= 0.0) throw Error(ErrorCode::BracketFailure, "could not isolate the positive root for r = 0");
    const double fhi = f(hi);
    if (fhi < -residual_tolerance(model, hi))
        throw Error(ErrorCode::BracketFailure, "characteristic equation negative at the upper bracket");
    const auto sol = solve_bracketed(f, lo, hi, flo, std::max(fhi, 0.0), model);
    return RootResult{sol.root, lo, hi, sol.residual, sol.iterations};
}

PsiValue psi(Family family, double k, double x) {
    if (family == Family::Arithmetic) {
        const double e = std::exp(k * x);
        return {e, k * e, k * k * e};
    }
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "geometric state must be positive");
    const double p = std::pow(x, k);
    return {p, k * p / x, k * (k - 1.0) * p / (x * x)};
}

double log_psi(Family family, double k, double x) {
    if (family == Family::Arithmetic) return k * x;
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "geometric state must be positive");
    return k * std::log(x);
}

double hitting_probability(const ValidatedModel& model, double x, double y) {
    if (x >= y) return 1.0;
    ModelSpec spec = model.spec();
    spec.discount = 0.0;
    const ValidatedModel m0 = validate(std::move(spec), Purpose::HittingProbability);
    if (char_eq_slope_at_zero(m0) >= 0.0) return 1.0;
    const double k = solve_k1(m0).k1;
    return std::exp(log_psi(model.family(), k, x) - log_psi(model.family(), k, y));
}

}  // namespace levystop
