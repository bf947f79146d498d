#include "bayesctl/serial.hpp"

#include "bayesctl/errors.hpp"
#include "bayesctl/posterior_laplace.hpp"

namespace bayesctl::serial {

DensityCurve sample_gain_density(const PlantPrior& prior, const CostSpec& cost, std::size_t n_points,
                                 std::optional<Window> window) {
    detail::require_density_inputs(prior, cost);
    DensityCurve curve;
    curve.kind = DensityKind::GainDensity;
    curve.abscissae = detail::uniform_grid(window.value_or(default_gain_window(prior, cost)), n_points);
    if (curve.abscissae.back() >= 0.0) throw DomainError("gain window must lie in theta < 0");
    curve.densities.assign(n_points, 0.0);
    for (std::size_t i = 0; i < n_points; ++i) curve.densities[i] = gain_density(curve.abscissae[i], prior, cost);
    return curve;
}

SweepGrid sweep(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values,
                const PlantPrior& prior_template, const CostSpec& cost, const SearchConfig& cfg,
                BracketPolicy policy) {
    detail::validate_sweep_axes(sigma_values, sigma_p_values);
    cost.validate();
    cfg.validate();
    SweepGrid grid = detail::make_sweep_grid(sigma_values, sigma_p_values);
    for (std::size_t cell = 0; cell < grid.status.size(); ++cell)
        detail::solve_sweep_cell(grid, cell, prior_template, cost, cfg, policy);
    return grid;
}

CostEstimate estimate_cost(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise,
                           const SimConfig& cfg) {
    detail::check_sim_inputs(cost, noise, cfg);
    std::vector<detail::PathCost> costs(static_cast<std::size_t>(cfg.n_paths));
    for (std::size_t i = 0; i < costs.size(); ++i) costs[i] = detail::path_cost(p, theta, cost, noise, cfg, i);
    return detail::summarize(costs);
}

DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid, const SearchConfig& cfg) {
    const std::vector<double> mesh = detail::induced_mesh(prior, n_grid);
    cost.validate();
    noise.validate();
    cfg.validate();
    std::vector<double> gains(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        try {
            gains[i] = per_p_optimal_gain(mesh[i], cost, noise, cfg);
        } catch (const NumericalError&) {
            throw ConvergenceError("per-p gain search failed on the p-mesh");
        }
    }
    return detail::assemble_induced_curve(prior, mesh, gains);
}

} // namespace bayesctl::serial
