#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bayesctl/model.hpp"

namespace bayesctl {

struct SearchConfig {
    double bracket_lo = -40.0;
    double bracket_hi = -1e-3;
    double tol_theta = 1e-6;
    int max_iters = 200;

    void validate() const;
};

// Bracket [-40 (1 + sigma_p), -1e-3]; tolerance and iteration cap at their defaults.
SearchConfig default_search_config(const PlantPrior& prior);

constexpr std::size_t kAuditPoints = 201;

// argmin over theta of the marginal expected cost, found by bracketed
// golden-section/parabolic search. The result is audited on a 201-point grid
// over the bracket; a grid value below the returned minimum is reported as a
// non-unimodal objective (ConvergenceError). A minimizer pinned to a bracket
// endpoint raises BracketError.
GainSolution bayes_optimal_gain(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                const SearchConfig& cfg);

// Central finite-difference slope of the marginal expected cost at the gain.
double verify_first_order(const GainSolution& gain, const PlantPrior& prior, const CostSpec& cost,
                          const MeasurementNoise& noise);

// Slope magnitude accepted as stationary: 1e-4 (1 + E[J]).
inline double first_order_tolerance(double expected_cost) { return 1e-4 * (1.0 + expected_cost); }

enum class CellStatus { Ok, BracketFailure, ConvergenceFailure, IterationLimit, DomainFailure };

const char* to_string(CellStatus status);

// Row-major over sigma_p (rows) then sigma (columns).
struct SweepGrid {
    std::vector<double> sigma_values;
    std::vector<double> sigma_p_values;
    std::vector<double> optimal_gain;
    std::vector<double> min_expected_cost;
    std::vector<double> stability_prob;
    std::vector<CellStatus> status;

    [[nodiscard]] std::size_t rows() const { return sigma_p_values.size(); }
    [[nodiscard]] std::size_t cols() const { return sigma_values.size(); }
    [[nodiscard]] std::size_t index(std::size_t sigma_p_row, std::size_t sigma_col) const {
        return sigma_p_row * cols() + sigma_col;
    }
};

enum class BracketPolicy {
    Fixed,              // every cell uses cfg's bracket
    ScaleWithSigmaP,    // each cell uses default_search_config(cell prior) bracket
};

// One bayes_optimal_gain per (sigma_p, sigma) cell. Cells run in parallel and
// write to preallocated slots; a failing cell records its status and the
// sweep continues.
SweepGrid sweep(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values,
                const PlantPrior& prior_template, const CostSpec& cost, const SearchConfig& cfg,
                BracketPolicy policy = BracketPolicy::ScaleWithSigmaP);

struct GainComparison {
    double theta_d = 0.0;
    double theta_s = 0.0;
    double cost_d = 0.0;
    double cost_s = 0.0;
    double stability_d = 0.0;
    double stability_s = 0.0;
    double cost_difference = 0.0;       // cost_d - cost_s
    double stability_difference = 0.0;  // stability_s - stability_d
};

GainComparison compare_gains(ControlGain theta_d, ControlGain theta_s, const PlantPrior& prior,
                             const CostSpec& cost, const MeasurementNoise& noise);

namespace detail {
void validate_sweep_axes(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values);
SweepGrid make_sweep_grid(const std::vector<double>& sigma_values, const std::vector<double>& sigma_p_values);
void solve_sweep_cell(SweepGrid& grid, std::size_t cell, const PlantPrior& prior_template, const CostSpec& cost,
                      const SearchConfig& cfg, BracketPolicy policy);
} // namespace detail

} // namespace bayesctl
