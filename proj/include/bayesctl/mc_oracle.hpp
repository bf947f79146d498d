#pragma once

// Monte Carlo simulation of the noisy closed loop
//   dx = (p + theta) x dt + theta sigma dW,  x(0) = 1,
// used as an independent check of the closed-form expected cost.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bayesctl/model.hpp"

namespace bayesctl {

enum class Scheme { EulerMaruyama, ExactTransition };

const char* to_string(Scheme scheme);

struct SimConfig {
    double dt = 1e-3;
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 20240917;
    Scheme scheme = Scheme::ExactTransition;

    void validate(double horizon) const;
};

struct SampledPath {
    std::vector<double> times;
    std::vector<double> states;
    bool overflowed = false;
};

struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_paths = 0;
    std::int64_t n_overflowed = 0;
};

// Paths whose |x| exceeds this are abandoned and counted as overflowed.
constexpr double kPathOverflow = 1e150;

// Per-path generator: the stream depends only on (seed, path_index).
std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index);

// Step count for a horizon; dt is shrunk so the steps tile [0, T] exactly.
std::size_t step_count(double horizon, double dt);

// One trajectory on the grid t_k = k T / n_steps.
SampledPath simulate_path(double p, double theta, const MeasurementNoise& noise, double horizon,
                          const SimConfig& cfg, std::uint64_t path_index = 0);

// Per-path trapezoidal cost of (1/2)(q + r theta^2) x^2; mean and standard
// error over cfg.n_paths paths. Paths run in parallel; reductions are pairwise
// in path-index order, so the result does not depend on the thread count.
CostEstimate estimate_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                           const SimConfig& cfg);

// Moments of the stochastic convolution I_t = int_0^t e^{a(t-s)} dW_s with a = p + theta,
// built from midpoint Ito sums (independent of the isometry it is compared with).
struct IntegralMoments {
    double terminal_mean = 0.0;           // E[I_T], should be 0
    double terminal_mean_se = 0.0;
    double cross_mean = 0.0;              // E[int_0^T e^{a t} I_t dt], should be 0
    double cross_mean_se = 0.0;
    double terminal_second_moment = 0.0;  // E[I_T^2]
    double terminal_second_moment_se = 0.0;
    double isometry_value = 0.0;          // int_0^T e^{2a(T-s)} ds
    std::int64_t n_paths = 0;
};

IntegralMoments stochastic_integral_moments(double p, double theta, double horizon, const SimConfig& cfg);

namespace detail {

struct PathCost {
    double cost = 0.0;
    bool overflowed = false;
};

PathCost path_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                   const SimConfig& cfg, std::uint64_t path_index);

struct IntegralSample {
    double terminal = 0.0;
    double cross = 0.0;
};

IntegralSample integral_sample(double a, double horizon, const SimConfig& cfg, std::uint64_t path_index);

// Pairwise (cascade) sum over [0, n) of f(i).
template <typename F>
double pairwise_sum(std::size_t begin, std::size_t end, F&& f) {
    if (end - begin <= 16) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

CostEstimate summarize(const std::vector<PathCost>& costs);

struct MeanSe {
    double mean;
    double se;
};
MeanSe mean_and_se(const std::vector<double>& values);

void check_sim_inputs(const CostSpec& cost, const MeasurementNoise& noise, const SimConfig& cfg);

} // namespace detail

} // namespace bayesctl
