#include "levystop/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

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

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegligibleCrossing = 1e-14;
constexpr int kCoarseFactor = 64;

double sample_gamma(double shape, PathRng& rng) {
    if (shape < 1.0) {
        const double g = sample_gamma(shape + 1.0, rng);
        return g * std::pow(rng.uniform(), 1.0 / shape);
    }
    // Marsaglia & Tsang
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
}

// Continuous part in the coordinate where it is a Brownian motion with
// drift: X itself (arithmetic) or ln X (geometric).
struct DrivingProcess {
    Family family;
    double drift;
    double sigma;
    double lambda;
    double jump_scale;
    const JumpDistribution* jumps;

    explicit DrivingProcess(const ValidatedModel& model)
        : family(model.family()),
          sigma(model.volatility()),
          lambda(model.lambda()),
          jump_scale(model.jump_scale()),
          jumps(&model.jumps()) {
        const double compensated = model.drift() + jump_scale * lambda * model.mean_jump();
        drift = family == Family::Arithmetic ? compensated : compensated - 0.5 * sigma * sigma;
    }

    double to_driving(double x) const {
        if (family == Family::Arithmetic) return x;
        if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "geometric state must be positive");
        return std::log(x);
    }

    // strictly negative for nondegenerate jumps
    double jump(PathRng& rng) const {
        const double z = sample_jump(*jumps, rng);
        return family == Family::Arithmetic ? -jump_scale * z : std::log1p(-z);
    }
};

// Walks one path and records first passage times to ascending levels.
// Between jump epochs the path is advanced in coarse steps; any step whose
// Brownian-bridge crossing probability is not negligible is bisected with
// exact bridge midpoints down to the resolution `step`, where the crossing
// is decided by the bridge probability.
class LevelWalker {
public:
    LevelWalker(const DrivingProcess& proc, std::span<const double> levels, double step, std::span<double> taus)
        : proc_(proc), levels_(levels), step_(step), taus_(taus) {}

    void run(double s0, double horizon, PathRng& rng) {
        std::fill(taus_.begin(), taus_.end(), kInf);
        next_ = 0;
        while (next_ < levels_.size() && levels_[next_] <= s0) taus_[next_++] = 0.0;
        const double coarse = kCoarseFactor * step_;
        double t = 0.0, s = s0;
        while (next_ < levels_.size() && t < horizon) {
            const double t_jump = proc_.lambda > 0.0 ? t + rng.exponential() / proc_.lambda : kInf;
            const double seg_end = std::min(t_jump, horizon);
            while (next_ < levels_.size() && t < seg_end) {
                const bool last = seg_end - t <= coarse;
                const double dt = last ? seg_end - t : coarse;
                const double b = s + proc_.drift * dt + proc_.sigma * std::sqrt(dt) * rng.normal();
                interval(t, dt, s, b, rng);
                s = b;
                t = last ? seg_end : t + dt;
            }
            if (next_ < levels_.size() && t_jump <= horizon) s += proc_.jump(rng);
        }
    }

private:
    double crossing_probability(double c, double a, double b, double dt) const {
        return std::exp(-2.0 * (c - a) * (c - b) / (proc_.sigma * proc_.sigma * dt));
    }

    void interval(double t0, double dt, double a, double b, PathRng& rng) {
        if (next_ >= levels_.size()) return;
        const double c = levels_[next_];
        if (b < c && crossing_probability(c, a, b, dt) < kNegligibleCrossing) return;
        if (dt <= step_ * (1.0 + 1e-9)) {
            finest(t0, dt, a, b, rng);
            return;
        }
        const double half = 0.5 * dt;
        const double mid = 0.5 * (a + b) + 0.5 * proc_.sigma * std::sqrt(dt) * rng.normal();
        interval(t0, half, a, mid, rng);
        interval(t0 + half, half, mid, b, rng);
    }

    void finest(double t0, double dt, double a, double b, PathRng& rng) {
        // one uniform for all levels keeps the hits monotone in the level
        const double u = rng.uniform();
        while (next_ < levels_.size()) {
            const double c = levels_[next_];
            const double p = b >= c ? 1.0 : crossing_probability(c, a, b, dt);
            if (!(u < p)) break;
            taus_[next_++] = t0 + 0.5 * dt;
        }
    }

    const DrivingProcess& proc_;
    std::span<const double> levels_;
    double step_;
    std::span<double> taus_;
    std::size_t next_ = 0;
};

std::vector<double> driving_levels(const DrivingProcess& proc, std::span<const double> levels) {
    if (!std::is_sorted(levels.begin(), levels.end()))
        throw Error(ErrorCode::InvalidArgument, "threshold levels must be sorted ascending");
    std::vector<double> out;
    out.reserve(levels.size());
    for (double y : levels) out.push_back(proc.to_driving(y));
    return out;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Runs fn(i) for every path index; each index writes only its own output
// slot, so results do not depend on the thread count.
template <class Fn>
void for_each_path(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

MCEstimate summarize(std::span<const double> samples, const McConfig& config, double horizon, double bound) {
    MCEstimate est;
    est.n_paths = samples.size();
    est.horizon = horizon;
    est.seed = config.seed;
    est.truncation_bound = bound;
    if (samples.empty()) return est;
    const double n = static_cast<double>(samples.size());
    est.mean = pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> dev(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = (samples[i] - est.mean) * (samples[i] - est.mean);
        est.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    return est;
}

double resolve_horizon(const ValidatedModel& model, const McConfig& config) {
    return config.horizon > 0.0 ? config.horizon : default_horizon(model);
}

void check_config(const McConfig& config) {
    if (config.n_paths == 0) throw Error(ErrorCode::InvalidArgument, "need at least one path");
    if (!(config.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "bridge step must be positive");
}

}  // namespace

double default_horizon(const ValidatedModel& model) {
    if (!(model.discount() > 0.0))
        throw Error(ErrorCode::ZeroDiscountForThreshold, "default horizon needs r > 0; pass a horizon explicitly");
    return std::log(1e4) / model.discount();
}

double sample_jump(const JumpDistribution& dist, PathRng& rng) {
    return std::visit(overloaded{
                          [&](const jumps::GammaLaw& g) { return sample_gamma(g.shape, rng) / g.rate; },
                          [&](const jumps::BetaLaw& b) {
                              const double x = sample_gamma(b.c, rng);
                              const double y = sample_gamma(b.d, rng);
                              const double z = x / (x + y);
                              return std::clamp(z, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
                          },
                          [&](const jumps::ExponentialLaw& e) { return rng.exponential() / e.rate; },
                          [](const jumps::PointMass& p) { return p.z; },
                          [&](const jumps::Tabulated& t) {
                              double total = 0.0;
                              for (double w : t.weights) total += w;
                              double u = rng.uniform() * total;
                              for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i) {
                                  if (u < t.weights[i]) return t.nodes[i];
                                  u -= t.weights[i];
                              }
                              return t.nodes.back();
                          },
                      },
                      dist);
}

std::vector<double> first_passage_times(const ValidatedModel& model, double x0, std::span<const double> levels,
                                        double horizon, PathRng& rng, double step) {
    const DrivingProcess proc(model);
    const auto driving = driving_levels(proc, levels);
    std::vector<double> taus(levels.size());
    LevelWalker(proc, driving, step, taus).run(proc.to_driving(x0), horizon, rng);
    return taus;
}

PassageResult simulate_to_threshold(const ValidatedModel& model, double x0, double y, double horizon, PathRng& rng,
                                    double step) {
    if (x0 >= y) return {true, 0.0, x0};
    const double level = y;
    const auto taus = first_passage_times(model, x0, std::span<const double>(&level, 1), horizon, rng, step);
    if (std::isinf(taus[0])) return {false, horizon, 0.0};
    // upward passage of a spectrally negative process is continuous
    return {true, taus[0], y};
}

MCEstimate estimate_laplace(const ValidatedModel& model, double x, double y, const McConfig& config) {
    check_config(config);
    const double horizon = resolve_horizon(model, config);
    if (x >= y) {
        MCEstimate est;
        est.mean = 1.0;
        est.n_paths = config.n_paths;
        est.horizon = horizon;
        est.seed = config.seed;
        return est;
    }
    const double r = model.discount();
    std::vector<double> samples(config.n_paths);
    for_each_path(config.n_paths, config.threads, [&](std::size_t i) {
        PathRng rng(config.seed, i);
        const PassageResult p = simulate_to_threshold(model, x, y, horizon, rng, config.step);
        samples[i] = p.hit ? std::exp(-r * p.tau) : 0.0;
    });
    return summarize(samples, config, horizon, std::exp(-r * horizon));
}

MCEstimate policy_value(const ValidatedModel& model, const Payoff& payoff, double x, double y,
                        const McConfig& config) {
    check_config(config);
    const double horizon = resolve_horizon(model, config);
    if (x >= y) {
        MCEstimate est;
        est.mean = payoff_eval(payoff, x);
        est.n_paths = config.n_paths;
        est.horizon = horizon;
        est.seed = config.seed;
        return est;
    }
    const double r = model.discount();
    std::vector<double> rewards(config.n_paths), discounts(config.n_paths);
    for_each_path(config.n_paths, config.threads, [&](std::size_t i) {
        PathRng rng(config.seed, i);
        const PassageResult p = simulate_to_threshold(model, x, y, horizon, rng, config.step);
        discounts[i] = p.hit ? std::exp(-r * p.tau) : 0.0;
        rewards[i] = p.hit ? discounts[i] * payoff_eval(payoff, p.x_at_tau) : 0.0;
    });
    const double gy = payoff_eval(payoff, y);
    MCEstimate est = summarize(rewards, config, horizon, std::exp(-r * horizon) * gy);
    const MCEstimate laplace = summarize(discounts, config, horizon, std::exp(-r * horizon));
    if (std::abs(est.mean - gy * laplace.mean) > 1e-12 * std::max(1.0, std::abs(est.mean)))
        throw std::logic_error("policy value and g(y) * laplace estimate disagree");
    return est;
}

GridSearchResult threshold_grid_search(const ValidatedModel& model, const Payoff& payoff, double x,
                                       std::span<const double> grid, const McConfig& config) {
    check_config(config);
    if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "threshold grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw Error(ErrorCode::InvalidArgument, "threshold grid must be sorted ascending");
    const double horizon = resolve_horizon(model, config);
    const double r = model.discount();
    const std::size_t m = grid.size();
    const std::size_t n = config.n_paths;

    std::vector<double> gains(m);
    for (std::size_t j = 0; j < m; ++j) gains[j] = payoff_eval(payoff, grid[j]);
    const double gx = payoff_eval(payoff, x);

    // values[i * m + j]: discounted reward of path i under threshold grid[j]
    std::vector<double> values(n * m);
    for_each_path(n, config.threads, [&](std::size_t i) {
        PathRng rng(config.seed, i);
        const auto taus = first_passage_times(model, x, grid, horizon, rng, config.step);
        for (std::size_t j = 0; j < m; ++j) {
            double v = 0.0;
            if (grid[j] <= x)
                v = gx;
            else if (!std::isinf(taus[j]))
                v = std::exp(-r * taus[j]) * gains[j];
            values[i * m + j] = v;
        }
    });

    GridSearchResult out;
    out.grid.assign(grid.begin(), grid.end());
    std::vector<double> column(n);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = values[i * m + j];
        const double bound = grid[j] <= x ? 0.0 : std::exp(-r * horizon) * gains[j];
        out.values.push_back(summarize(column, config, horizon, bound));
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j)
        if (out.values[j].mean >= out.values[best].mean) best = j;
    out.best_y = grid[best];
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = values[i * m + best] - values[i * m + j];
        out.gap_to_best.push_back(summarize(column, config, horizon, out.values[best].truncation_bound));
    }
    return out;
}

bool within_contract(const MCEstimate& estimate, double target, double k) noexcept {
    return std::abs(estimate.mean - target) <= k * estimate.std_error + estimate.truncation_bound;
}

}  // namespace levystop
