#pragma once

// Pushforward of a Gaussian belief on p through the optimal-gain map g and
// the optimal-cost map h of the noiseless problem.

#include <cstddef>
#include <optional>
#include <vector>

#include "bayesctl/model.hpp"

namespace bayesctl {

enum class DensityKind { GainDensity, CostDensity };

// Tabulated density; abscissae strictly increasing.
struct DensityCurve {
    std::vector<double> abscissae;
    std::vector<double> densities;
    DensityKind kind = DensityKind::GainDensity;

    [[nodiscard]] std::size_t size() const { return abscissae.size(); }
    // Trapezoidal integral over the tabulated range.
    [[nodiscard]] double trapezoid() const;
    void validate() const;
};

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

// f_p(g^{-1}(theta)) * (1/2)(1 + q/(r theta^2)); theta < 0.
double gain_density(double theta, const PlantPrior& prior, const CostSpec& cost);

// f_p(h^{-1}(J)) * (1/r + q/(4 J^2)); J > 0.
double cost_density(double cost_value, const PlantPrior& prior, const CostSpec& cost);

// E_p[g(p)] and E_p[h(p)] by Gauss-Hermite quadrature in p. Both are
// cross-checked between 80 and 120 nodes (relative agreement 1e-8).
double gain_mean(const PlantPrior& prior, const CostSpec& cost);
double cost_mean(const PlantPrior& prior, const CostSpec& cost);

constexpr std::size_t kDefaultDensityPoints = 1001;
constexpr double kDefaultWindowSigmas = 6.0;

// Image under g (resp. h) of p_hat -/+ sigmas * sigma_p, ordered ascending.
Window default_gain_window(const PlantPrior& prior, const CostSpec& cost,
                           double sigmas = kDefaultWindowSigmas);
Window default_cost_window(const PlantPrior& prior, const CostSpec& cost,
                           double sigmas = kDefaultWindowSigmas);

// Uniform tabulation over the window (default window when omitted).
// Points are evaluated in parallel; see serial.hpp for the reference loop.
DensityCurve sample_gain_density(const PlantPrior& prior, const CostSpec& cost,
                                 std::size_t n_points = kDefaultDensityPoints,
                                 std::optional<Window> window = std::nullopt);
DensityCurve sample_cost_density(const PlantPrior& prior, const CostSpec& cost,
                                 std::size_t n_points = kDefaultDensityPoints,
                                 std::optional<Window> window = std::nullopt);

namespace detail {
std::vector<double> uniform_grid(const Window& window, std::size_t n_points);
void require_density_inputs(const PlantPrior& prior, const CostSpec& cost);
} // namespace detail

} // namespace bayesctl
