#pragma once

// Distribution of the per-p optimal gain in the noisy setting: the prior on p
// pushed through p -> argmin_theta E_W[J | p], and its Laplace fit.

#include <cstddef>
#include <vector>

#include "bayesctl/gain_search.hpp"
#include "bayesctl/model.hpp"
#include "bayesctl/pushforward.hpp"

namespace bayesctl {

struct LaplaceFit {
    double mode = 0.0;
    double std = 0.0;
    double density_at_mode = 0.0;  // tabulated density at the best grid point
    DensityCurve curve;

    // Density of the fitted N(mode, std^2).
    [[nodiscard]] double gaussian_density(double theta) const;
};

constexpr std::size_t kDefaultInducedMesh = 401;

// argmin_theta E_W[J | p]. The bracketed search result is polished by
// bisection on a central-difference slope so that neighbouring p values get
// gains accurate to ~1e-12, which the finite-difference Jacobian needs.
double per_p_optimal_gain(double p, const CostSpec& cost, const MeasurementNoise& noise, const SearchConfig& cfg);

// Bracket for the per-p searches on [lower, upper].
SearchConfig default_per_p_search_config(const PlantPrior& prior);

// Tabulates theta(p) on a uniform n_grid mesh over the truncated support and
// forms f_theta = f_p(p) / |dtheta/dp| (centred differences, one-sided at the
// ends). Abscissae are returned ascending in theta. Throws MonotonicityError
// if theta(p) is not strictly monotone on the mesh.
DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid = kDefaultInducedMesh);
DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid, const SearchConfig& cfg);

// Mode by parabolic interpolation of log f through the best grid point and
// its neighbours; std from the curvature of that parabola.
LaplaceFit laplace_fit(const DensityCurve& curve);

namespace detail {
std::vector<double> induced_mesh(const PlantPrior& prior, std::size_t n_grid);
DensityCurve assemble_induced_curve(const PlantPrior& prior, const std::vector<double>& mesh,
                                    const std::vector<double>& gains);
} // namespace detail

} // namespace bayesctl
