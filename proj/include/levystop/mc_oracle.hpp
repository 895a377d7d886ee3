#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "levystop/model.hpp"
#include "levystop/rng.hpp"

namespace levystop {

struct McConfig {
    std::size_t n_paths = 100000;
    std::uint64_t seed = 0;
    double horizon = 0.0;  ///< 0 selects ln(1e4) / r
    double step = 1e-2;    ///< finest bridge-refinement interval
    unsigned threads = 0;  ///< 0 selects the hardware concurrency
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    double truncation_bound = 0.0;  ///< bias bound from paths still running at the horizon
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

struct PassageResult {
    bool hit = false;
    double tau = 0.0;
    double x_at_tau = 0.0;
};

/// Horizon T with exp(-r T) = 1e-4.
double default_horizon(const ValidatedModel& model);

/// Jump size Z drawn from the law (the state moves by -gamma Z or by the factor 1 - Z).
double sample_jump(const JumpDistribution& dist, PathRng& rng);

/// First passage of one path above y, started at x0, monitored up to T.
PassageResult simulate_to_threshold(const ValidatedModel& model, double x0, double y, double horizon,
                                    PathRng& rng, double step = 1e-2);

/// First passage times of one path to every level (ascending); +inf for
/// levels not reached by the horizon, 0 for levels at or below x0.
std::vector<double> first_passage_times(const ValidatedModel& model, double x0, std::span<const double> levels,
                                        double horizon, PathRng& rng, double step = 1e-2);

/// Estimate of E_x[exp(-r tau_y)].
MCEstimate estimate_laplace(const ValidatedModel& model, double x, double y, const McConfig& config);

/// Estimate of E_x[exp(-r tau_y) g(X_tau_y)].
MCEstimate policy_value(const ValidatedModel& model, const Payoff& payoff, double x, double y,
                        const McConfig& config);

struct GridSearchResult {
    double best_y = 0.0;
    std::vector<double> grid;
    std::vector<MCEstimate> values;
    /// Paired estimate of value(best_y) - value(y) under common random numbers.
    std::vector<MCEstimate> gap_to_best;
};

/// Policy values on a sorted threshold grid from a single set of paths.
GridSearchResult threshold_grid_search(const ValidatedModel& model, const Payoff& payoff, double x,
                                       std::span<const double> grid, const McConfig& config);

/// |mean - target| <= k * stderr + truncation_bound.
bool within_contract(const MCEstimate& estimate, double target, double k = 3.0) noexcept;

}  // namespace levystop
