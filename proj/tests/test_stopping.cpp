#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "levystop/charroots.hpp"
#include "levystop/error.hpp"
#include "levystop/stopping.hpp"
#include "oracles.hpp"

using namespace levystop;

namespace {

double figure2_k1_oracle() {
    return oracle::bisect(
        [](double k) {
            const double pt = oracle::beta_expect(1.25, 5.0, [&](double z) { return std::pow(1.0 - z, k); });
            return 0.005 * k * (k - 1.0) + 0.029 * k - 0.07 + 0.02 * pt;
        },
        1.2, 2.5);
}

int sign_changes(const std::vector<double>& v) {
    int changes = 0, last = 0;
    for (double x : v) {
        const int s = x > 0.0 ? 1 : (x < 0.0 ? -1 : 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

payoffs::Tabulated scaled(payoffs::Tabulated t, double c) {
    for (auto& row : t.coefficients)
        for (double& v : row) v *= c;
    return t;
}

}  // namespace

TEST_CASE("power call threshold examples") {
    const auto s = solve_threshold(Family::Geometric, payoffs::PowerCall{1, 1, 1}, 1.719);
    CHECK(s.x_star == doctest::Approx(1.719 / 0.719).epsilon(1e-14));
    CHECK(std::abs(s.x_star - 2.39) < 0.005);
    REQUIRE(s.multiplier.has_value());
    CHECK(*s.multiplier == doctest::Approx(s.x_star));
    CHECK(s.smooth_fit.smooth);
    CHECK(solve_threshold(Family::Geometric, payoffs::PowerCall{1, 1, 1}, 2.0).x_star == doctest::Approx(2.0));
    // general a, b, K
    const double k = 1.4, a = 2.0, b = 0.5, K = 3.0;
    const auto g = solve_threshold(Family::Geometric, payoffs::PowerCall{a, b, K}, k);
    CHECK(g.x_star == doctest::Approx(std::pow(k * K / ((k - b) * a), 1.0 / b)).epsilon(1e-14));
    const double num = oracle::argmax([&](double x) { return (a * std::sqrt(x) - K) / std::pow(x, k); }, 2.25, 50.0);
    CHECK(g.x_star == doctest::Approx(num).epsilon(1e-7));
}

TEST_CASE("power call needs k1 > b") {
    try {
        solve_threshold(Family::Geometric, payoffs::PowerCall{1, 1, 1}, 0.8);
        FAIL("expected NoFiniteThreshold");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoFiniteThreshold);
    }
    CHECK_NOTHROW(solve_threshold(Family::Geometric, payoffs::PowerCall{1, 0.2, 1}, 0.8));
}

TEST_CASE("capped call: corner versus interior optimum") {
    const Payoff p = payoffs::CappedCall{2.0, 1.0};
    const auto corner = solve_threshold(Family::Arithmetic, p, 0.5);
    CHECK(corner.x_star == 2.0);
    CHECK(corner.kink_optimum);
    CHECK_FALSE(corner.smooth_fit.smooth);
    CHECK(smooth_fit_gap(corner, p) == 0.5);
    CHECK(corner.smooth_fit.gap == 0.5);

    const auto interior = solve_threshold(Family::Arithmetic, p, 2.0);
    CHECK(interior.x_star == 1.5);
    CHECK_FALSE(interior.kink_optimum);
    CHECK(std::abs(smooth_fit_gap(interior, p)) < 1e-15);
    CHECK(interior.smooth_fit.smooth);

    // boundary case k1 = 1/(K - I): interior formula lands on K
    CHECK(solve_threshold(Family::Arithmetic, p, 1.0).x_star == 2.0);

    // gap equals k1 (K - I) to rounding for several parameterisations
    for (double k1 : {0.05, 0.3, 0.6295591279614874, 0.99}) {
        for (auto [K, I] : {std::pair{2.0, 1.0}, std::pair{1.5, 0.7}, std::pair{1.9, 0.95}}) {
            if (k1 >= 1.0 / (K - I)) continue;
            const Payoff c = payoffs::CappedCall{K, I};
            const auto sol = solve_threshold(Family::Arithmetic, c, k1);
            CHECK(sol.x_star == K);
            CHECK(std::abs(smooth_fit_gap(sol, c) - k1 * (K - I)) <= 1e-12);
        }
    }

    // geometric capped call
    const auto geo = solve_threshold(Family::Geometric, payoffs::CappedCall{3.0, 1.0}, 2.0);
    CHECK(geo.x_star == doctest::Approx(2.0));
    CHECK(std::abs(geo.smooth_fit.gap) < 1e-14);
    CHECK(solve_threshold(Family::Geometric, payoffs::CappedCall{3.0, 1.0}, 1.2).x_star == 3.0);
}

TEST_CASE("value function examples") {
    const auto m = fixtures::figure2();
    const double k1 = solve_k1(m).k1;
    CHECK(k1 == doctest::Approx(figure2_k1_oracle()).epsilon(1e-10));
    const auto s = solve_threshold(m, payoffs::PowerCall{1, 1, 1}, k1);
    CHECK(value_fn(s, s.x_star) == s.value_at_star);
    CHECK(s.value_at_star == doctest::Approx(s.x_star - 1.0));
    const double xs = k1 / (k1 - 1.0);
    CHECK(value_fn(s, 1.0) == doctest::Approx((xs - 1.0) * std::pow(1.0 / xs, k1)).epsilon(1e-13));
    CHECK(value_fn(s, 1.0) == doctest::Approx(0.31053962280971104).epsilon(1e-9));

    const double kc = 0.5;
    const auto c = solve_threshold(Family::Arithmetic, payoffs::CappedCall{2.0, 1.0}, kc);
    for (double x : {-3.0, 0.0, 1.2, 1.99})
        CHECK(value_fn(c, x) == doctest::Approx(1.0 * std::exp(kc * (x - 2.0))).epsilon(1e-14));
    CHECK(value_fn(c, 5.0) == 1.0);
}

TEST_CASE("foc sign pattern around the power-call threshold") {
    const Payoff p = payoffs::PowerCall{1, 1, 1};
    const double k1 = 1.719;
    const double scale = std::pow(2.39, k1);
    CHECK(std::abs(foc(Family::Geometric, p, k1, 2.39)) < 1e-3 * scale);
    CHECK(std::abs(foc(Family::Geometric, p, k1, 1.719 / 0.719)) < 1e-14 * scale);
    CHECK(foc(Family::Geometric, p, k1, 1.5) > 0.0);
    CHECK(foc(Family::Geometric, p, k1, 3.0) < 0.0);
    CHECK_THROWS_AS(foc(Family::Geometric, p, k1, 1.0), Error);
    CHECK_THROWS_AS(foc(Family::Arithmetic, payoffs::CappedCall{2, 1}, 0.5, 2.0), Error);
}

TEST_CASE("property: foc has a single sign change past the break-even point") {
    struct Case {
        Family family;
        Payoff payoff;
        double k1;
        double hi;
    };
    const std::vector<Case> cases{
        {Family::Geometric, payoffs::PowerCall{1, 1, 1}, 1.720141331733495, 8.0},
        {Family::Geometric, payoffs::PowerCall{1, 0.2, 1}, 0.6, 40.0},
        {Family::Geometric, payoffs::PowerCall{2, 0.5, 3}, 1.4, 60.0},
        {Family::Arithmetic, payoffs::CappedCall{5.0, 1.0}, 2.0, 4.9},
    };
    for (const auto& c : cases) {
        const double x0 = break_even(c.payoff);
        std::vector<double> values;
        for (int i = 1; i <= 10000; ++i) {
            const double x = x0 + (c.hi - x0) * (i - 0.5) / 10000.0;
            values.push_back(foc(c.family, c.payoff, c.k1, x));
        }
        CHECK(sign_changes(values) == 1);
        CHECK(values.front() > 0.0);
        CHECK(values.back() < 0.0);
    }
}

TEST_CASE("property: V majorises g with equality exactly above x*") {
    std::vector<ThresholdSolution> sols{
        solve_threshold(Family::Geometric, payoffs::PowerCall{1, 1, 1}, 1.72),
        solve_threshold(Family::Geometric, payoffs::PowerCall{1, 0.2, 1}, 0.6),
        solve_threshold(Family::Arithmetic, payoffs::CappedCall{2, 1}, 0.63),
        solve_threshold(Family::Arithmetic, payoffs::CappedCall{5, 1}, 2.0),
    };
    for (const auto& s : sols) {
        const double lo = s.family == Family::Geometric ? 0.01 : -5.0;
        const double hi = 2.0 * s.x_star + 1.0;
        for (int i = 0; i <= 2000; ++i) {
            const double x = lo + (hi - lo) * i / 2000.0;
            const double v = value_fn(s, x), g = payoff_eval(s.payoff, x);
            CHECK(v >= g - 1e-14 * std::max(1.0, g));
            CHECK(v >= 0.0);
            if (x >= s.x_star) CHECK(v == g);
            else if (x < s.x_star - 1e-3 * std::abs(s.x_star)) CHECK(v > g);
        }
    }
}

TEST_CASE("property: first-order condition at interior optima") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> k(1.05, 6.0), a(0.5, 3.0), b(0.1, 1.0), K(0.5, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double kk = k(rng);
        const Payoff p = payoffs::PowerCall{a(rng), b(rng), K(rng)};
        const auto s = solve_threshold(Family::Geometric, p, kk);
        const PsiValue ps = psi(Family::Geometric, kk, s.x_star);
        const double lhs = payoff_deriv(p, s.x_star, Side::Right) * ps.value;
        const double rhs = payoff_eval(p, s.x_star) * ps.first;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        CHECK(s.smooth_fit.smooth);
    }
}

TEST_CASE("property: scaling the payoff scales V and leaves x* unchanged") {
    const payoffs::Tabulated base{{0.0, 1.0, 2.5, 4.0}, {{-1.0, 1.0, 0.0, 0.0}, {0.0, 1.0, 0.2, 0.0}, {1.95, 0.5, 0.0, 0.0}}};
    const auto s1 = solve_threshold(Family::Arithmetic, base, 0.8);
    for (double c : {0.1, 3.0, 1000.0}) {
        const auto sc = solve_threshold(Family::Arithmetic, scaled(base, c), 0.8);
        CHECK(sc.x_star == doctest::Approx(s1.x_star).epsilon(1e-9));
        for (double x : {-2.0, 0.5, 1.7, 3.0}) CHECK(value_fn(sc, x) == doctest::Approx(c * value_fn(s1, x)).epsilon(1e-9));
    }
    const auto p1 = solve_threshold(Family::Geometric, payoffs::PowerCall{1, 0.5, 1}, 1.3);
    const auto p7 = solve_threshold(Family::Geometric, payoffs::PowerCall{7, 0.5, 7}, 1.3);
    CHECK(p7.x_star == doctest::Approx(p1.x_star).epsilon(1e-14));
    CHECK(value_fn(p7, 1.5) == doctest::Approx(7.0 * value_fn(p1, 1.5)).epsilon(1e-13));
}

TEST_CASE("property: multiplier lies between the jump-free multipliers") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const auto m = fixtures::random_model(rng, Family::Geometric);
        if (m.lambda() < 1e-3) continue;
        const double k1 = solve_k1(m).k1;
        const double b = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
        const double k_r = continuous_root(m, m.discount());
        if (!(k_r > b)) continue;
        const double k_rl = continuous_root(m, m.discount() + m.lambda());
        const auto s = solve_threshold(m, payoffs::PowerCall{1, b, 1}, k1);
        const double P = *s.multiplier;
        CHECK(k_rl / (k_rl - b) < P);
        CHECK(P < k_r / (k_r - b));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("numeric route agrees with the closed forms") {
    for (double k1 : {0.3, 0.9, 1.0, 1.7, 4.0}) {
        const Payoff c = payoffs::CappedCall{2.0, 1.0};
        const auto closed = solve_threshold(Family::Arithmetic, c, k1);
        const auto numeric = solve_threshold_numeric(Family::Arithmetic, c, k1);
        CHECK(numeric.x_star == doctest::Approx(closed.x_star).epsilon(1e-9));
        CHECK(numeric.kink_optimum == closed.kink_optimum);
    }
    for (double k1 : {1.2, 1.720141331733495, 3.0}) {
        const Payoff p = payoffs::PowerCall{1, 1, 1};
        CHECK(solve_threshold_numeric(Family::Geometric, p, k1).x_star ==
              doctest::Approx(solve_threshold(Family::Geometric, p, k1).x_star).epsilon(1e-9));
    }
    const Payoff low_b = payoffs::PowerCall{1, 0.2, 1};
    CHECK(solve_threshold_numeric(Family::Geometric, low_b, 0.6).x_star ==
          doctest::Approx(solve_threshold(Family::Geometric, low_b, 0.6).x_star).epsilon(1e-9));
}

TEST_CASE("tabulated payoff threshold against a direct maximisation") {
    // smooth convex-then-linear payoff on [0, 4], constant beyond
    const payoffs::Tabulated t{{0.0, 1.0, 2.0, 4.0},
                               {{-0.5, 0.2, 0.3, 0.0}, {0.0, 0.8, 0.1, 0.05}, {0.95, 1.15, 0.0, 0.0}}};
    CHECK_NOTHROW(validate_payoff(t, Family::Arithmetic));
    for (double k1 : {0.4, 0.9, 2.0}) {
        const auto s = solve_threshold(Family::Arithmetic, t, k1);
        const double ref = oracle::argmax([&](double x) { return payoff_eval(t, x) * std::exp(-k1 * x); },
                                          break_even(t), 4.0, 40000);
        CHECK(s.x_star == doctest::Approx(ref).epsilon(1e-6));
        CHECK(s.warnings.empty());
    }
}

TEST_CASE("tabulated payoff with two local maxima raises a warning") {
    // steep rise to 1 on [0, 1], flat, steep rise to 3 on [3, 3.2], flat
    const payoffs::Tabulated t{{-0.5, 1.0, 3.0, 3.2, 6.0},
                               {{-0.5, 1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, {1.0, 10.0, 0.0, 0.0}, {3.0, 0.0, 0.0, 0.0}}};
    const auto s = solve_threshold(Family::Arithmetic, t, 0.5);
    CHECK_FALSE(s.warnings.empty());
    // global maximiser of g e^{-x/2}: compare the two kinks
    const double v1 = 1.0 * std::exp(-0.5), v2 = 3.0 * std::exp(-1.6);
    CHECK(s.x_star == (v2 > v1 ? 3.2 : 1.0));
}

TEST_CASE("convexity diagnostic") {
    const auto s = solve_threshold(Family::Geometric, payoffs::PowerCall{1, 1, 1}, 1.72);
    CHECK(convexity_defect(s, 0.1, 6.0, 2001) >= -1e-12);
    const auto c = solve_threshold(Family::Arithmetic, payoffs::CappedCall{2, 1}, 0.6);
    CHECK(convexity_defect(c, 1.0, 3.0, 201) < 0.0);  // the capped payoff bends down at K
    CHECK_THROWS_AS(convexity_defect(s, 1.0, 0.5, 10), Error);
}
