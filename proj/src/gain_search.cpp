#include "bayesctl/gain_search.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bayesctl/errors.hpp"
#include "bayesctl/quadrature.hpp"
#include "bayesctl/scalar_search.hpp"
#include "bayesctl/stochastic_cost.hpp"

namespace bayesctl {

void SearchConfig::validate() const {
    if (!(bracket_lo < bracket_hi)) throw DomainError("bracket_lo < bracket_hi");
    if (!(tol_theta > 0.0)) throw DomainError("tol_theta must be positive");
    if (max_iters < 1) throw DomainError("max_iters must be a positive integer");
}

SearchConfig default_search_config(const PlantPrior& prior) {
    SearchConfig cfg;
    cfg.bracket_lo = -40.0 * (1.0 + prior.sigma_p);
    cfg.bracket_hi = -1e-3;
    return cfg;
}

GainSolution bayes_optimal_gain(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                const SearchConfig& cfg) {
    prior.validate();
    cost.validate();
    noise.validate();
    cfg.validate();
    if (!cost.finite_horizon()) throw DomainError("Bayesian gain search requires a finite horizon T");

    const QuadratureRule rule = prior_rule(prior, default_node_count(prior.kind));
    auto objective = [&](double theta) { return marginal_expected_cost(theta, prior, cost, noise, rule); };

    const ScalarMinimum best = brent_minimize(objective, cfg.bracket_lo, cfg.bracket_hi, cfg.tol_theta, cfg.max_iters);
    const double edge_gap = std::min(best.x - cfg.bracket_lo, cfg.bracket_hi - best.x);
    if (edge_gap <= 4.0 * cfg.tol_theta + 3e-8 * std::abs(best.x)) {
        std::ostringstream msg;
        msg << "minimizer at bracket endpoint (theta = " << best.x << "); widen [" << cfg.bracket_lo << ", "
            << cfg.bracket_hi << "]";
        throw BracketError(msg.str());
    }

    const double slack = 1e-9 * (1.0 + std::abs(best.fx));
    for (std::size_t i = 0; i < kAuditPoints; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(kAuditPoints - 1);
        const double theta = cfg.bracket_lo + t * (cfg.bracket_hi - cfg.bracket_lo);
        if (objective(theta) < best.fx - slack) {
            std::ostringstream msg;
            msg << "objective not unimodal on bracket: audit point theta = " << theta
                << " is below the search result theta = " << best.x;
            throw ConvergenceError(msg.str());
        }
    }

    GainSolution out;
    out.gain = ControlGain{best.x};
    out.method = GainMethod::Bayesian;
    out.expected_cost = marginal_expected_cost(best.x, prior, cost, noise);  // converged check
    out.stability_prob = stability_probability(best.x, prior);
    return out;
}

double verify_first_order(const GainSolution& gain, const PlantPrior& prior, const CostSpec& cost,
                          const MeasurementNoise& noise) {
    const QuadratureRule rule = prior_rule(prior, default_node_count(prior.kind));
    const double theta = gain.gain.theta;
    const double h = 1e-4 * (1.0 + std::abs(theta));
    const double up = marginal_expected_cost(theta + h, prior, cost, noise, rule);
    const double down = marginal_expected_cost(theta - h, prior, cost, noise, rule);
    return (up - down) / (2.0 * h);
}

const char* to_string(CellStatus status) {
    switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::BracketFailure: return "bracket_error";
    case CellStatus::ConvergenceFailure: return "convergence_error";
    case CellStatus::IterationLimit: return "iteration_limit";
    case CellStatus::DomainFailure: return "domain_error";
    }
    return "unknown";
}

namespace detail {

void validate_sweep_axes(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values) {
    if (sigma_values.empty() || sigma_p_values.empty()) throw DomainError("sweep grids must be nonempty");
    auto check = [](const std::vector<double>& axis, const char* name) {
        for (std::size_t i = 0; i < axis.size(); ++i) {
            if (!(axis[i] >= 0.0)) throw DomainError(std::string(name) + " values must be >= 0");
            if (i > 0 && !(axis[i] > axis[i - 1]))
                throw DomainError(std::string(name) + " values must be sorted ascending");
        }
    };
    check(sigma_values, "sigma");
    check(sigma_p_values, "sigma_p");
}

SweepGrid make_sweep_grid(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values) {
    SweepGrid grid;
    grid.sigma_values = sigma_values;
    grid.sigma_p_values = sigma_p_values;
    const std::size_t cells = sigma_values.size() * sigma_p_values.size();
    const double nan = std::nan("");
    grid.optimal_gain.assign(cells, nan);
    grid.min_expected_cost.assign(cells, nan);
    grid.stability_prob.assign(cells, nan);
    grid.status.assign(cells, CellStatus::Ok);
    return grid;
}

void solve_sweep_cell(SweepGrid& grid, std::size_t cell, const PlantPrior& prior_template, const CostSpec& cost,
                      const SearchConfig& cfg, BracketPolicy policy) {
    const std::size_t row = cell / grid.cols();
    const std::size_t col = cell % grid.cols();
    PlantPrior prior = prior_template;
    prior.sigma_p = grid.sigma_p_values[row];
    SearchConfig cell_cfg = cfg;
    if (policy == BracketPolicy::ScaleWithSigmaP) {
        const SearchConfig bracket = default_search_config(prior);
        cell_cfg.bracket_lo = bracket.bracket_lo;
        cell_cfg.bracket_hi = bracket.bracket_hi;
    }
    try {
        const GainSolution sol = bayes_optimal_gain(prior, cost, MeasurementNoise{grid.sigma_values[col]}, cell_cfg);
        grid.optimal_gain[cell] = sol.gain.theta;
        grid.min_expected_cost[cell] = sol.expected_cost;
        grid.stability_prob[cell] = sol.stability_prob;
        grid.status[cell] = CellStatus::Ok;
    } catch (const BracketError&) {
        grid.status[cell] = CellStatus::BracketFailure;
    } catch (const IterationLimitError&) {
        grid.status[cell] = CellStatus::IterationLimit;
    } catch (const NumericalError&) {
        grid.status[cell] = CellStatus::ConvergenceFailure;
    } catch (const std::domain_error&) {
        grid.status[cell] = CellStatus::DomainFailure;
    }
}

} // namespace detail

SweepGrid sweep(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values,
                const PlantPrior& prior_template, const CostSpec& cost, const SearchConfig& cfg,
                BracketPolicy policy) {
    detail::validate_sweep_axes(sigma_values, sigma_p_values);
    cost.validate();
    cfg.validate();
    SweepGrid grid = detail::make_sweep_grid(sigma_values, sigma_p_values);
    const auto cells = static_cast<std::ptrdiff_t>(grid.status.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t cell = 0; cell < cells; ++cell)
        detail::solve_sweep_cell(grid, static_cast<std::size_t>(cell), prior_template, cost, cfg, policy);
    return grid;
}

GainComparison compare_gains(ControlGain theta_d, ControlGain theta_s, const PlantPrior& prior,
                             const CostSpec& cost, const MeasurementNoise& noise) {
    GainComparison cmp;
    cmp.theta_d = theta_d.theta;
    cmp.theta_s = theta_s.theta;
    cmp.cost_d = marginal_expected_cost(theta_d.theta, prior, cost, noise);
    cmp.cost_s = marginal_expected_cost(theta_s.theta, prior, cost, noise);
    cmp.stability_d = stability_probability(theta_d.theta, prior);
    cmp.stability_s = stability_probability(theta_s.theta, prior);
    cmp.cost_difference = cmp.cost_d - cmp.cost_s;
    cmp.stability_difference = cmp.stability_s - cmp.stability_d;
    return cmp;
}

} // namespace bayesctl
