#include "levystop/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levystop/error.hpp"
#include "levystop/io.hpp"
#include "levystop/transforms.hpp"

namespace levystop {

namespace {

constexpr int kDefaultGridPoints = 200;

double jump_transform_at(const ValidatedModel& model, double k1) {
    if (model.family() == Family::Arithmetic) return laplace_transform(model.jumps(), model.jump_scale() * k1);
    return power_transform(model.jumps(), k1);
}

bool ordered(double lo, double mid, double hi) {
    const double tol = 1e-10 * std::max({1.0, std::abs(lo), std::abs(mid), std::abs(hi)});
    return lo <= mid + tol && mid <= hi + tol;
}

}  // namespace

std::vector<double> default_grid(const ValidatedModel& model, const Payoff& payoff) {
    const double x0 = break_even(payoff);
    const double k_r = continuous_root(model, model.discount());
    const double x_star_r = solve_threshold(model.family(), payoff, k_r).x_star;
    const double lo = model.family() == Family::Arithmetic ? x0 - 5.0 : 0.5 * x0;
    const double hi = x_star_r > 0.0 ? 1.5 * x_star_r : x_star_r + 5.0;
    std::vector<double> grid(kDefaultGridPoints);
    for (int i = 0; i < kDefaultGridPoints; ++i) grid[i] = lo + (hi - lo) * i / (kDefaultGridPoints - 1);
    return grid;
}

SandwichReport sandwich(const ValidatedModel& model, const Payoff& payoff, std::span<const double> grid) {
    SandwichReport rep;
    rep.root = solve_k1(model);
    rep.solution = solve_threshold(model, payoff, rep.root.k1);
    const double r = model.discount();
    rep.k_low = continuous_root(model, r);
    rep.k_high = continuous_root(model, r + model.lambda());
    const ThresholdSolution upper = solve_threshold(model.family(), payoff, rep.k_low);
    const ThresholdSolution lower = solve_threshold(model.family(), payoff, rep.k_high);
    rep.x_star_low = lower.x_star;
    rep.x_star_high = upper.x_star;
    rep.theta_star = adjusted_discount(model, rep.root.k1);
    rep.mu_tilde = adjusted_drift(model, rep.root.k1);

    if (!ordered(rep.x_star_low, rep.solution.x_star, rep.x_star_high))
        throw Error(ErrorCode::SandwichViolation, "thresholds are not ordered x*_{r+lambda} <= x* <= x*_r");

    rep.grid_values.reserve(grid.size());
    for (double x : grid) {
        SandwichRow row{x, value_fn(lower, x), value_fn(rep.solution, x), value_fn(upper, x)};
        if (!ordered(row.v_low, row.v, row.v_high))
            throw Error(ErrorCode::SandwichViolation, "value ordering fails at x = " + format_general(x));
        rep.grid_values.push_back(row);
    }
    return rep;
}

SandwichReport sandwich(const ValidatedModel& model, const Payoff& payoff) {
    const auto grid = default_grid(model, payoff);
    return sandwich(model, payoff, grid);
}

double adjusted_discount(const ValidatedModel& model, double k1) {
    if (model.lambda() == 0.0) return model.discount();
    return model.discount() + model.lambda() * (1.0 - jump_transform_at(model, k1));
}

double adjusted_drift(const ValidatedModel& model, double k1) {
    const double c = compensated_drift(model);
    if (model.lambda() == 0.0) return c;
    return c + model.lambda() / k1 * jump_transform_at(model, k1);
}

double certainty_growth(const ValidatedModel& model, double k1, double x) {
    const double rate = model.discount() / k1;
    return model.family() == Family::Arithmetic ? rate : rate * x;
}

double certainty_time(const ValidatedModel& model, double k1, double x, double x_star) {
    if (x >= x_star) return 0.0;
    const double gap = log_psi(model.family(), k1, x_star) - log_psi(model.family(), k1, x);
    return std::max(gap, 0.0) / model.discount();
}

double certainty_flow(const ValidatedModel& model, double k1, double x, double t) {
    const double rate = model.discount() / k1;
    return model.family() == Family::Arithmetic ? x + rate * t : x * std::exp(rate * t);
}

std::string to_csv(const SandwichReport& report) {
    std::ostringstream out;
    out << csv_row({"x", "v_low", "v", "v_high"});
    for (const auto& row : report.grid_values)
        out << csv_row({format_general(row.x), format_general(row.v_low), format_general(row.v),
                        format_general(row.v_high)});
    return out.str();
}

}  // namespace levystop
