#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-item work with the parallel versions and must produce bit-identical
// results; tests and bench_kernels compare the two.

#include <cstddef>
#include <optional>
#include <vector>

#include "bayesctl/gain_search.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/pushforward.hpp"

namespace bayesctl::serial {

DensityCurve sample_gain_density(const PlantPrior& prior, const CostSpec& cost,
                                 std::size_t n_points = kDefaultDensityPoints,
                                 std::optional<Window> window = std::nullopt);

SweepGrid sweep(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values,
                const PlantPrior& prior_template, const CostSpec& cost, const SearchConfig& cfg,
                BracketPolicy policy = BracketPolicy::ScaleWithSigmaP);

CostEstimate estimate_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                           const SimConfig& cfg);

DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid, const SearchConfig& cfg);

} // namespace bayesctl::serial
