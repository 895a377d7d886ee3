#include "levystop/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "levystop/charroots.hpp"
#include "levystop/error.hpp"

namespace levystop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 10000;

// log(g / psi); -inf where g <= 0.
double log_ratio(Family family, const Payoff& payoff, double k1, double x) {
    if (family == Family::Geometric && x <= 0.0) return kNegInf;
    const double g = payoff_eval(payoff, x);
    if (!(g > 0.0)) return kNegInf;
    return std::log(g) - log_psi(family, k1, x);
}

// (g' psi - g psi') / psi, same sign as foc without overflowing psi.
double foc_scaled(Family family, const Payoff& payoff, double k1, double x, Side side) {
    const double dlog_psi = family == Family::Arithmetic ? k1 : k1 / x;
    return payoff_deriv(payoff, x, side) - payoff_eval(payoff, x) * dlog_psi;
}

double upper_search_limit(Family family, const Payoff& payoff, double k1, double x0) {
    if (const auto* t = std::get_if<payoffs::Tabulated>(&payoff)) return t->breakpoints.back();
    if (const auto* c = std::get_if<payoffs::CappedCall>(&payoff)) return c->K;
    // unbounded payoff: expand until g / psi is decreasing
    double d = std::max(1.0, std::abs(x0));
    for (int i = 0; i < 60; ++i) {
        const double x = x0 + d;
        if (foc_scaled(family, payoff, k1, x, Side::Right) < 0.0) return x0 + 2.0 * d;
        d *= 2.0;
    }
    throw Error(ErrorCode::NoFiniteThreshold, "g / psi is increasing on the whole search range");
}

double golden_section_max(Family family, const Payoff& payoff, double k1, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double x) { return log_ratio(family, payoff, k1, x); };
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 300 && (b - a) > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void finalize(ThresholdSolution& sol) {
    sol.value_at_star = payoff_eval(sol.payoff, sol.x_star);
    if (!sol.kink_optimum) sol.kink_optimum = is_kink(sol.payoff, sol.x_star);
    const double gap = smooth_fit_gap(sol, sol.payoff);
    const double slope = std::abs(value_deriv(sol, sol.x_star, Side::Left));
    sol.smooth_fit = SmoothFit{std::abs(gap) <= 1e-9 * std::max(1.0, slope), gap};
}

}  // namespace

ThresholdSolution solve_threshold_numeric(Family family, const Payoff& payoff, double k1) {
    if (!(k1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "k1 must be positive");
    const double x0 = break_even(payoff);
    const double x_hi = upper_search_limit(family, payoff, k1, x0);
    if (!(x_hi > x0)) throw Error(ErrorCode::NoFiniteThreshold, "empty search interval above the break-even point");

    ThresholdSolution sol;
    sol.family = family;
    sol.payoff = payoff;
    sol.k1 = k1;

    // coarse scan; ">=" keeps the largest maximiser on ties
    std::vector<double> xs(kScanPoints), phi(kScanPoints);
    std::size_t best = 0;
    for (int i = 0; i < kScanPoints; ++i) {
        xs[i] = x0 + (x_hi - x0) * static_cast<double>(i + 1) / kScanPoints;
        phi[i] = log_ratio(family, payoff, k1, xs[i]);
        if (phi[i] >= phi[best]) best = static_cast<std::size_t>(i);
    }
    int local_maxima = 0;
    int last_sign = 0;
    for (int i = 1; i < kScanPoints; ++i) {
        const double diff = phi[i] - phi[i - 1];
        const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign > 0 && sign < 0) ++local_maxima;
        last_sign = sign;
    }
    if (local_maxima > 1) sol.warnings.emplace_back("g/psi appears multimodal: the single-threshold hypothesis may fail");

    const double lo = best == 0 ? x0 : xs[best - 1];
    const double hi = best + 1 < xs.size() ? xs[best + 1] : x_hi;

    std::vector<double> candidates{xs[best], golden_section_max(family, payoff, k1, lo, hi)};
    bool kink_inside = false;
    for (double kink : payoff_kinks(payoff)) {
        if (kink > x0 && kink <= x_hi) candidates.push_back(kink);
        if (kink > lo && kink < hi) kink_inside = true;
    }
    // first-order refinement when the bracket is smooth and the FOC changes sign
    std::optional<double> foc_root;
    if (!kink_inside) {
        double a = lo, b = hi;
        double fa = foc_scaled(family, payoff, k1, a, Side::Right);
        double fb = foc_scaled(family, payoff, k1, b, Side::Left);
        if (fa > 0.0 && fb < 0.0) {
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                (foc_scaled(family, payoff, k1, m, Side::Right) > 0.0 ? a : b) = m;
            }
            foc_root = 0.5 * (a + b);
        }
    }
    // g / psi is flat at a smooth maximum, so candidates within rounding of
    // each other are the same optimum; the FOC root is the accurate one.
    // Distinct points with equal values resolve to the larger one.
    double x_star = foc_root.value_or(candidates.front());
    double phi_star = log_ratio(family, payoff, k1, x_star);
    const double same_point = 1e-6 * std::max(1.0, x_hi - x0);
    for (double c : candidates) {
        const double v = log_ratio(family, payoff, k1, c);
        const double tie = 1e-12 * std::max(1.0, std::abs(phi_star));
        const bool better = v > phi_star + tie;
        const bool tied_larger = std::abs(v - phi_star) <= tie && c > x_star + same_point;
        if (better || tied_larger) {
            x_star = c;
            phi_star = v;
        }
    }
    for (double kink : payoff_kinks(payoff))
        if (std::abs(kink - x_star) <= 1e-9 * std::max(1.0, std::abs(kink))) x_star = kink;

    sol.x_star = x_star;
    if (const auto* p = std::get_if<payoffs::PowerCall>(&payoff); p && family == Family::Geometric)
        sol.multiplier = k1 / (k1 - p->b);
    finalize(sol);
    return sol;
}

ThresholdSolution solve_threshold(Family family, const Payoff& payoff, double k1) {
    if (!(k1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "k1 must be positive");
    if (std::holds_alternative<payoffs::Tabulated>(payoff)) return solve_threshold_numeric(family, payoff, k1);
    if (family == Family::Arithmetic && std::holds_alternative<payoffs::PowerCall>(payoff))
        return solve_threshold_numeric(family, payoff, k1);

    ThresholdSolution sol;
    sol.family = family;
    sol.payoff = payoff;
    sol.k1 = k1;
    if (const auto* c = std::get_if<payoffs::CappedCall>(&payoff)) {
        double interior = std::numeric_limits<double>::infinity();
        if (family == Family::Arithmetic) {
            if (k1 >= 1.0 / (c->K - c->I)) interior = c->I + 1.0 / k1;
        } else if (k1 > 1.0) {
            interior = k1 * c->I / (k1 - 1.0);
        }
        sol.x_star = std::min(interior, c->K);
        sol.kink_optimum = !(interior < c->K);
    } else {
        const auto& p = std::get<payoffs::PowerCall>(payoff);
        if (!(k1 > p.b))
            throw Error(ErrorCode::NoFiniteThreshold, "power call needs k1 > b for a finite threshold");
        sol.multiplier = k1 / (k1 - p.b);
        sol.x_star = std::pow(*sol.multiplier * p.K / p.a, 1.0 / p.b);
    }
    finalize(sol);
    return sol;
}

ThresholdSolution solve_threshold(const ValidatedModel& model, const Payoff& payoff, double k1) {
    validate_payoff(payoff, model.family());
    ThresholdSolution sol = solve_threshold(model.family(), payoff, k1);
    if (!(sol.x_star > break_even(payoff)))
        throw Error(ErrorCode::NoFiniteThreshold, "threshold does not exceed the break-even point");
    return sol;
}

double value_fn(const ThresholdSolution& solution, double x) {
    if (x >= solution.x_star) return payoff_eval(solution.payoff, x);
    return solution.value_at_star *
           std::exp(log_psi(solution.family, solution.k1, x) - log_psi(solution.family, solution.k1, solution.x_star));
}

double value_deriv(const ThresholdSolution& solution, double x, Side side) {
    const bool stopping = x > solution.x_star || (x == solution.x_star && side == Side::Right);
    if (stopping) return payoff_deriv(solution.payoff, x, side);
    const double dlog_psi = solution.family == Family::Arithmetic ? solution.k1 : solution.k1 / x;
    return value_fn(solution, x) * dlog_psi;
}

double foc(Family family, const Payoff& payoff, double k1, double x) {
    if (is_kink(payoff, x)) throw Error(ErrorCode::KinkPoint, "first-order condition undefined at a payoff kink");
    const PsiValue p = psi(family, k1, x);
    return payoff_deriv(payoff, x, Side::Right) * p.value - payoff_eval(payoff, x) * p.first;
}

double foc(const ValidatedModel& model, const Payoff& payoff, double k1, double x) {
    return foc(model.family(), payoff, k1, x);
}

double smooth_fit_gap(const ThresholdSolution& solution, const Payoff& payoff) {
    const double x = solution.x_star;
    const double dlog_psi = solution.family == Family::Arithmetic ? solution.k1 : solution.k1 / x;
    return payoff_eval(payoff, x) * dlog_psi - payoff_deriv(payoff, x, Side::Right);
}

double convexity_defect(const ThresholdSolution& solution, double lo, double hi, int n) {
    if (n < 3 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "convexity check needs n >= 3 and lo < hi");
    std::vector<double> v(static_cast<std::size_t>(n));
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = value_fn(solution, lo + (hi - lo) * i / (n - 1));
        scale = std::max(scale, std::abs(v[i]));
    }
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < n; ++i) worst = std::min(worst, (v[i + 1] - 2.0 * v[i] + v[i - 1]) / std::max(scale, 1e-300));
    return worst;
}

}  // namespace levystop
