#include "bayesctl/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bayesctl/errors.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/posterior_laplace.hpp"
#include "bayesctl/stochastic_cost.hpp"

namespace bayesctl {

namespace {

using nlohmann::json;

json envelope(const RunConfig& cfg, const char* command) {
    json j;
    j["schema_version"] = kReportSchema;
    j["command"] = command;
    j["config"] = to_json(cfg);
    return j;
}

// JSON has no inf/nan; those become null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::filesystem::path write_file(const RunConfig& cfg, const std::string& name, const std::string& body) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.output_dir.string() + "': " + ec.message());
    const std::filesystem::path path = cfg.output_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
    return path;
}

std::filesystem::path write_json(const RunConfig& cfg, const std::string& name, const json& j) {
    return write_file(cfg, name, j.dump(2) + "\n");
}

void require_finite_horizon(const RunConfig& cfg, const char* command) {
    if (!cfg.cost.finite_horizon())
        throw ConfigError(std::string(command) + " requires a finite horizon T (measurement-noise cost diverges as T -> inf)");
}

json solution_json(const GainSolution& sol) {
    return json{{"gain", sol.gain.theta},
                {"expected_cost", number_or_null(sol.expected_cost)},
                {"stability_prob", sol.stability_prob},
                {"method", to_string(sol.method)}};
}

GainSolution deterministic_solution(const RunConfig& cfg) {
    GainSolution sol;
    sol.gain = deterministic_optimal_gain(cfg.plant.p_hat, cfg.cost);
    sol.expected_cost = optimal_cost_of_p(cfg.plant.p_hat, cfg.cost);
    sol.method = GainMethod::Deterministic;
    sol.stability_prob = stability_probability(sol.gain.theta, cfg.plant);
    return sol;
}

GainSolution bayes_solution(const RunConfig& cfg) {
    require_finite_horizon(cfg, "Bayesian search");
    return bayes_optimal_gain(cfg.plant, cfg.cost, cfg.noise, cfg.search_for(cfg.plant));
}

} // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::string density_csv(const DensityCurve& curve) {
    std::string out = "abscissa,density\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        out += format_double(curve.abscissae[i]);
        out += ',';
        out += format_double(curve.densities[i]);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepGrid& grid) {
    std::string out = "sigma,sigma_p,theta_star,expected_cost,stability_prob,status\n";
    for (std::size_t row = 0; row < grid.rows(); ++row) {
        for (std::size_t col = 0; col < grid.cols(); ++col) {
            const std::size_t i = grid.index(row, col);
            out += format_double(grid.sigma_values[col]) + ',' + format_double(grid.sigma_p_values[row]) + ',' +
                   format_double(grid.optimal_gain[i]) + ',' + format_double(grid.min_expected_cost[i]) + ',' +
                   format_double(grid.stability_prob[i]) + ',' + to_string(grid.status[i]) + '\n';
        }
    }
    return out;
}

CommandResult cmd_solve(const RunConfig& cfg, SolveMode mode) {
    const GainSolution sol = mode == SolveMode::Deterministic ? deterministic_solution(cfg) : bayes_solution(cfg);
    CommandResult res;
    res.report = envelope(cfg, "solve");
    res.report["mode"] = mode == SolveMode::Deterministic ? "deterministic" : "bayes";
    res.report["result"] = solution_json(sol);
    if (mode == SolveMode::Bayes)
        res.report["result"]["first_order_slope"] = verify_first_order(sol, cfg.plant, cfg.cost, cfg.noise);
    res.files.push_back(write_json(cfg, mode == SolveMode::Deterministic ? "solve_deterministic.json" : "solve_bayes.json",
                                   res.report));
    return res;
}

CommandResult cmd_density(const RunConfig& cfg, DensityCommand kind) {
    CommandResult res;
    res.report = envelope(cfg, "density");
    json result;
    DensityCurve curve;
    std::string stem;
    if (kind == DensityCommand::Induced) {
        if (cfg.window) throw ConfigError("--window applies to gain/cost densities only");
        if (!cfg.plant.is_truncated()) throw ConfigError("induced density requires a truncated prior");
        require_finite_horizon(cfg, "induced density");
        curve = induced_gain_distribution(cfg.plant, cfg.cost, cfg.noise, cfg.n_grid,
                                          [&] {
                                              SearchConfig s = default_per_p_search_config(cfg.plant);
                                              s.tol_theta = cfg.search.tol_theta;
                                              s.max_iters = cfg.search.max_iters;
                                              return s;
                                          }());
        const LaplaceFit fit = laplace_fit(curve);
        result["kind"] = "induced";
        result["laplace_mode"] = fit.mode;
        result["laplace_std"] = fit.std;
        result["n_grid"] = cfg.n_grid;
        stem = "density_induced";
    } else {
        if (cfg.plant.is_truncated()) throw ConfigError("gain/cost densities require a Gaussian prior");
        detail::require_density_inputs(cfg.plant, cfg.cost);
        if (kind == DensityCommand::Gain) {
            const Window w = cfg.window.value_or(default_gain_window(cfg.plant, cfg.cost));
            curve = sample_gain_density(cfg.plant, cfg.cost, cfg.n_points, w);
            result["kind"] = "gain";
            result["expected_gain"] = gain_mean(cfg.plant, cfg.cost);
            result["deterministic_gain"] = deterministic_optimal_gain(cfg.plant.p_hat, cfg.cost).theta;
            result["window"] = json::array({w.lo, w.hi});
            stem = "density_gain";
        } else {
            const Window w = cfg.window.value_or(default_cost_window(cfg.plant, cfg.cost));
            curve = sample_cost_density(cfg.plant, cfg.cost, cfg.n_points, w);
            result["kind"] = "cost";
            result["expected_cost"] = cost_mean(cfg.plant, cfg.cost);
            result["deterministic_cost"] = optimal_cost_of_p(cfg.plant.p_hat, cfg.cost);
            result["window"] = json::array({w.lo, w.hi});
            stem = "density_cost";
        }
        result["n_points"] = cfg.n_points;
    }
    result["trapezoid"] = curve.trapezoid();
    res.report["result"] = result;
    res.files.push_back(write_file(cfg, stem + ".csv", density_csv(curve)));
    res.files.push_back(write_json(cfg, stem + ".json", res.report));
    return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    require_finite_horizon(cfg, "sweep");
    const BracketPolicy policy = cfg.search_bracket_explicit ? BracketPolicy::Fixed : BracketPolicy::ScaleWithSigmaP;
    const SweepGrid grid =
        sweep(cfg.sigma_grid.values(), cfg.sigma_p_grid.values(), cfg.plant, cfg.cost, cfg.search, policy);
    std::size_t failures = 0;
    for (CellStatus s : grid.status) failures += s == CellStatus::Ok ? 0 : 1;
    CommandResult res;
    res.report = envelope(cfg, "sweep");
    res.report["result"] = json{{"rows", grid.rows()}, {"cols", grid.cols()}, {"failed_cells", failures},
                                {"order", "row-major over sigma_p then sigma"}};
    res.files.push_back(write_file(cfg, "sweep.csv", sweep_csv(grid)));
    res.files.push_back(write_json(cfg, "sweep.json", res.report));
    return res;
}

CommandResult cmd_validate(const RunConfig& cfg, double formula_scale) {
    require_finite_horizon(cfg, "validate");
    const double p = cfg.plant.p_hat;
    const double theta = cfg.theta.value_or(deterministic_optimal_gain(p, cfg.cost).theta);
    const double closed = formula_scale * expected_cost_given_p(p, theta, cfg.cost, cfg.noise);
    const CostEstimate mc = estimate_cost(p, theta, cfg.cost, cfg.noise, cfg.sim);

    json result{{"p", p},
                {"theta", theta},
                {"closed_form", closed},
                {"formula_scale", formula_scale},
                {"mc_mean", number_or_null(mc.mean)},
                {"mc_std_error", number_or_null(mc.std_error)},
                {"n_paths", mc.n_paths},
                {"n_overflowed", mc.n_overflowed},
                {"scheme", to_string(cfg.sim.scheme)}};
    bool pass;
    if (mc.std_error > 0.0) {
        const double z = (mc.mean - closed) / mc.std_error;
        result["z"] = number_or_null(z);
        result["criterion"] = "|z| <= 3";
        pass = std::abs(z) <= 3.0;
    } else {
        // Noise-free paths: only time discretization separates the two.
        const double rel = std::abs(mc.mean - closed) / std::abs(closed);
        result["z"] = nullptr;
        result["relative_error"] = number_or_null(rel);
        result["criterion"] = "relative error <= 1e-3";
        pass = rel <= 1e-3;
    }
    pass = pass && mc.n_overflowed == 0;
    result["pass"] = pass;
    CommandResult res;
    res.report = envelope(cfg, "validate");
    res.report["result"] = result;
    res.exit_code = pass ? kExitOk : kExitValidationFailed;
    res.files.push_back(write_json(cfg, "validate.json", res.report));
    return res;
}

CommandResult cmd_compare(const RunConfig& cfg) {
    const GainSolution det = deterministic_solution(cfg);
    const GainSolution bayes = bayes_solution(cfg);
    const GainComparison cmp = compare_gains(det.gain, bayes.gain, cfg.plant, cfg.cost, cfg.noise);
    const double nominal = optimal_cost_of_p(cfg.plant.p_hat, cfg.cost);
    CommandResult res;
    res.report = envelope(cfg, "compare");
    res.report["result"] = json{{"theta_d", cmp.theta_d},
                                {"theta_s", cmp.theta_s},
                                {"J_d_star", nominal},
                                {"cost_at_theta_d", cmp.cost_d},
                                {"cost_at_theta_s", cmp.cost_s},
                                {"overconfidence_ratio", cmp.cost_d / nominal},
                                {"stability_prob_d", cmp.stability_d},
                                {"stability_prob_s", cmp.stability_s},
                                {"cost_difference", cmp.cost_difference},
                                {"stability_difference", cmp.stability_difference}};
    res.files.push_back(write_json(cfg, "compare.json", res.report));
    return res;
}

CommandResult cmd_laplace(const RunConfig& cfg) {
    if (!cfg.plant.is_truncated()) throw ConfigError("laplace requires a truncated prior");
    require_finite_horizon(cfg, "laplace");
    SearchConfig per_p = default_per_p_search_config(cfg.plant);
    per_p.tol_theta = cfg.search.tol_theta;
    per_p.max_iters = cfg.search.max_iters;
    const DensityCurve curve = induced_gain_distribution(cfg.plant, cfg.cost, cfg.noise, cfg.n_grid, per_p);
    const LaplaceFit fit = laplace_fit(curve);
    const GainSolution det = deterministic_solution(cfg);
    const GainSolution bayes = bayes_solution(cfg);

    std::string csv = "abscissa,density,laplace_density\n";
    for (std::size_t i = 0; i < curve.size(); ++i) {
        csv += format_double(curve.abscissae[i]) + ',' + format_double(curve.densities[i]) + ',' +
               format_double(fit.gaussian_density(curve.abscissae[i])) + '\n';
    }
    CommandResult res;
    res.report = envelope(cfg, "laplace");
    res.report["result"] = json{{"mode", fit.mode},
                                {"std", fit.std},
                                {"density_at_mode", fit.density_at_mode},
                                {"laplace_peak_ratio", fit.gaussian_density(fit.mode) / fit.density_at_mode},
                                {"trapezoid", curve.trapezoid()},
                                {"theta_d", det.gain.theta},
                                {"theta_s", bayes.gain.theta},
                                {"expected_cost_theta_s", bayes.expected_cost}};
    res.files.push_back(write_file(cfg, "laplace.csv", csv));
    res.files.push_back(write_json(cfg, "laplace.json", res.report));
    return res;
}

} // namespace bayesctl
