#include "bayesctl/mc_oracle.hpp"

#include <cmath>
#include <limits>

#include "bayesctl/errors.hpp"

namespace bayesctl {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Exact one-step transition of the linear SDE over a step of length dt.
struct Transition {
    double decay;      // e^{a dt}
    double noise_std;  // sqrt((e^{2a dt} - 1)/(2a)), or sqrt(dt) in the limit
};

Transition exact_transition(double a, double dt) {
    Transition tr;
    tr.decay = std::exp(a * dt);
    if (std::abs(a) < 1e-6 * (1.0 + std::abs(a))) {
        tr.noise_std = std::sqrt(dt);
    } else {
        tr.noise_std = std::sqrt(std::expm1(2.0 * a * dt) / (2.0 * a));
    }
    return tr;
}

// Advances x by one step using the standard normal draw xi.
struct Stepper {
    Scheme scheme;
    double a;
    double dt;
    double diffusion;  // theta sigma
    Transition tr;
    double sqrt_dt;

    Stepper(Scheme s, double drift, double step, double diff)
        : scheme(s), a(drift), dt(step), diffusion(diff), tr(exact_transition(drift, step)), sqrt_dt(std::sqrt(step)) {}

    [[nodiscard]] double operator()(double x, double xi) const {
        if (scheme == Scheme::ExactTransition) return tr.decay * x + diffusion * tr.noise_std * xi;
        return x + a * x * dt + diffusion * sqrt_dt * xi;
    }
};

} // namespace

const char* to_string(Scheme scheme) {
    return scheme == Scheme::ExactTransition ? "exact" : "euler_maruyama";
}

void SimConfig::validate(double horizon) const {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(dt <= horizon)) throw DomainError("dt must not exceed the horizon T");
    if (n_paths < 1) throw DomainError("n_paths must be >= 1");
}

std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(path_index + 0x632BE59BD9B4E019ULL)));
}

std::size_t step_count(double horizon, double dt) {
    const double raw = horizon / dt;
    const double rounded = std::round(raw);
    auto n = static_cast<std::size_t>(std::abs(raw - rounded) <= 1e-9 * rounded ? rounded : std::ceil(raw));
    return n == 0 ? 1 : n;
}

SampledPath simulate_path(double p, double theta, const MeasurementNoise& noise, double horizon,
                          const SimConfig& cfg, std::uint64_t path_index) {
    noise.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("simulation requires a finite horizon T > 0");
    cfg.validate(horizon);
    const std::size_t n = step_count(horizon, cfg.dt);
    const double dt = horizon / static_cast<double>(n);
    const Stepper step(cfg.scheme, p + theta, dt, theta * noise.sigma);
    auto engine = path_engine(cfg.seed, path_index);
    std::normal_distribution<double> normal;

    SampledPath path;
    path.times.reserve(n + 1);
    path.states.reserve(n + 1);
    path.times.push_back(0.0);
    path.states.push_back(1.0);
    double x = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        x = step(x, normal(engine));
        if (!(std::abs(x) <= kPathOverflow)) {
            path.overflowed = true;
            break;
        }
        path.times.push_back(dt * static_cast<double>(k + 1));
        path.states.push_back(x);
    }
    return path;
}

namespace detail {

void check_sim_inputs(const CostSpec& cost, const MeasurementNoise& noise, const SimConfig& cfg) {
    cost.validate();
    noise.validate();
    if (!cost.finite_horizon()) throw DomainError("simulation requires a finite horizon T");
    cfg.validate(cost.horizon);
}

PathCost path_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                   const SimConfig& cfg, std::uint64_t path_index) {
    const std::size_t n = step_count(cost.horizon, cfg.dt);
    const double dt = cost.horizon / static_cast<double>(n);
    const Stepper step(cfg.scheme, p + theta, dt, theta * noise.sigma);
    auto engine = path_engine(cfg.seed, path_index);
    std::normal_distribution<double> normal;

    double x = 1.0;
    double sum_sq = 0.5;  // trapezoid end weight for x(0)^2 = 1
    for (std::size_t k = 0; k < n; ++k) {
        x = step(x, normal(engine));
        if (!(std::abs(x) <= kPathOverflow)) return {std::numeric_limits<double>::infinity(), true};
        sum_sq += (k + 1 == n ? 0.5 : 1.0) * x * x;
    }
    return {0.5 * (cost.q + cost.r * theta * theta) * sum_sq * dt, false};
}

IntegralSample integral_sample(double a, double horizon, const SimConfig& cfg, std::uint64_t path_index) {
    const std::size_t n = step_count(horizon, cfg.dt);
    const double dt = horizon / static_cast<double>(n);
    const double decay = std::exp(a * dt);
    const double half_decay = std::exp(0.5 * a * dt);
    const double sqrt_dt = std::sqrt(dt);
    auto engine = path_engine(cfg.seed, path_index);
    std::normal_distribution<double> normal;

    double integral = 0.0;
    double cross = 0.0;  // trapezoid of e^{a t} I_t; I_0 = 0
    for (std::size_t k = 0; k < n; ++k) {
        integral = decay * integral + half_decay * sqrt_dt * normal(engine);
        const double t = dt * static_cast<double>(k + 1);
        cross += (k + 1 == n ? 0.5 : 1.0) * std::exp(a * t) * integral;
    }
    return {integral, cross * dt};
}

MeanSe mean_and_se(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0) return {std::nan(""), std::nan("")};
    const double mean = pairwise_sum(0, n, [&](std::size_t i) { return values[i]; }) / static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    const double ss = pairwise_sum(0, n, [&](std::size_t i) {
        const double d = values[i] - mean;
        return d * d;
    });
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

CostEstimate summarize(const std::vector<PathCost>& costs) {
    std::vector<double> finite;
    finite.reserve(costs.size());
    CostEstimate est;
    for (const PathCost& c : costs) {
        if (c.overflowed) {
            ++est.n_overflowed;
        } else {
            finite.push_back(c.cost);
        }
    }
    const MeanSe stats = mean_and_se(finite);
    est.mean = stats.mean;
    est.std_error = stats.se;
    est.n_paths = static_cast<std::int64_t>(finite.size());
    return est;
}

} // namespace detail

CostEstimate estimate_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                           const SimConfig& cfg) {
    detail::check_sim_inputs(cost, noise, cfg);
    std::vector<detail::PathCost> costs(static_cast<std::size_t>(cfg.n_paths));
    const auto n = static_cast<std::ptrdiff_t>(cfg.n_paths);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        costs[i] = detail::path_cost(p, theta, cost, noise, cfg, static_cast<std::uint64_t>(i));
    return detail::summarize(costs);
}

IntegralMoments stochastic_integral_moments(double p, double theta, double horizon, const SimConfig& cfg) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("simulation requires a finite horizon T > 0");
    cfg.validate(horizon);
    const double a = p + theta;
    const auto n = static_cast<std::size_t>(cfg.n_paths);
    std::vector<double> terminal(n), cross(n), squared(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const detail::IntegralSample s = detail::integral_sample(a, horizon, cfg, static_cast<std::uint64_t>(i));
        terminal[i] = s.terminal;
        cross[i] = s.cross;
        squared[i] = s.terminal * s.terminal;
    }
    const detail::MeanSe m1 = detail::mean_and_se(terminal);
    const detail::MeanSe mc = detail::mean_and_se(cross);
    const detail::MeanSe m2 = detail::mean_and_se(squared);

    IntegralMoments out;
    out.terminal_mean = m1.mean;
    out.terminal_mean_se = m1.se;
    out.cross_mean = mc.mean;
    out.cross_mean_se = mc.se;
    out.terminal_second_moment = m2.mean;
    out.terminal_second_moment_se = m2.se;
    out.isometry_value = std::abs(a) < 1e-12 ? horizon : std::expm1(2.0 * a * horizon) / (2.0 * a);
    out.n_paths = cfg.n_paths;
    return out;
}

} // namespace bayesctl
