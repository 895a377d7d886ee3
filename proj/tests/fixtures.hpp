#pragma once

#include <random>

#include "levystop/model.hpp"

namespace fixtures {

using namespace levystop;

inline ModelSpec arithmetic(double mu, double sigma, double lambda, JumpDistribution dist, double r,
                            double gamma = 1.0) {
    return ModelSpec{{Family::Arithmetic, mu, sigma, gamma}, lambda, std::move(dist), r};
}

inline ModelSpec geometric(double alpha, double sigma, double lambda, JumpDistribution dist, double r) {
    return ModelSpec{{Family::Geometric, alpha, sigma, 1.0}, lambda, std::move(dist), r};
}

/// mu = 0.04, r = 0.05, gamma = 1, Gamma(1, 1) jumps.
inline ValidatedModel table1(double sigma, double lambda) {
    return validate(arithmetic(0.04, sigma, lambda, jumps::GammaLaw{1.0, 1.0}, 0.05));
}

/// alpha = 0.025, r = 0.05, lambda = 0.02, sigma = 0.1, Beta(1.25, 5).
inline ValidatedModel figure2() {
    return validate(geometric(0.025, 0.1, 0.02, jumps::BetaLaw{1.25, 5.0}, 0.05));
}

/// alpha = 0.04, r = 0.02, lambda = 0.01, sigma = 0.1, Beta(1.25, 2).
inline ValidatedModel figure3() {
    return validate(geometric(0.04, 0.1, 0.01, jumps::BetaLaw{1.25, 2.0}, 0.02));
}

inline JumpDistribution random_arithmetic_law(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    switch (pick(rng)) {
        case 0: return jumps::GammaLaw{u(rng), u(rng)};
        case 1: return jumps::ExponentialLaw{u(rng)};
        case 2: return jumps::PointMass{u(rng)};
        default: {
            const double a = u(rng), b = u(rng), w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
            return jumps::Tabulated{{a, b}, {w, 1.0 - w}};
        }
    }
}

inline JumpDistribution random_geometric_law(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> u(0.3, 6.0);
    std::uniform_real_distribution<double> z(0.02, 0.9);
    switch (pick(rng)) {
        case 0: return jumps::BetaLaw{u(rng), u(rng)};
        case 1: return jumps::PointMass{z(rng)};
        default: {
            const double w = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
            return jumps::Tabulated{{z(rng), z(rng)}, {w, 1.0 - w}};
        }
    }
}

/// A valid threshold model with parameters drawn from broad ranges.
inline ValidatedModel random_model(std::mt19937_64& rng, Family family) {
    std::uniform_real_distribution<double> drift(-0.05, 0.08), sigma(0.02, 0.6), lambda(0.0, 0.5),
        r(0.005, 0.15), gamma(0.1, 2.0);
    if (family == Family::Arithmetic)
        return validate(arithmetic(drift(rng), sigma(rng), lambda(rng), random_arithmetic_law(rng), r(rng), gamma(rng)));
    return validate(geometric(drift(rng), sigma(rng), lambda(rng), random_geometric_law(rng), r(rng)));
}

}  // namespace fixtures
