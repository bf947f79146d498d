#include "bayesctl/posterior_laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bayesctl/errors.hpp"
#include "bayesctl/scalar_search.hpp"
#include "bayesctl/stochastic_cost.hpp"

namespace bayesctl {

double LaplaceFit::gaussian_density(double theta) const {
    const double z = (theta - mode) / std;
    return standard_normal_pdf(z) / std;
}

double per_p_optimal_gain(double p, const CostSpec& cost, const MeasurementNoise& noise, const SearchConfig& cfg) {
    cost.validate();
    noise.validate();
    cfg.validate();
    auto objective = [&](double theta) { return expected_cost_given_p(p, theta, cost, noise); };
    const ScalarMinimum best = brent_minimize(objective, cfg.bracket_lo, cfg.bracket_hi, cfg.tol_theta, cfg.max_iters);
    const double edge_gap = std::min(best.x - cfg.bracket_lo, cfg.bracket_hi - best.x);
    if (edge_gap <= 4.0 * cfg.tol_theta + 3e-8 * std::abs(best.x))
        throw BracketError("per-p minimizer at bracket endpoint");

    const double h = 1e-4 * (1.0 + std::abs(best.x));
    auto slope = [&](double theta) { return objective(theta + h) - objective(theta - h); };
    double step = std::max(10.0 * cfg.tol_theta, 1e-7 * std::abs(best.x));
    double lo = best.x - step;
    double hi = best.x + step;
    for (int i = 0; i < 40 && !(slope(lo) < 0.0 && slope(hi) > 0.0); ++i) {
        step *= 2.0;
        lo = std::max(best.x - step, cfg.bracket_lo + h);
        hi = std::min(best.x + step, cfg.bracket_hi - h);
    }
    if (!(slope(lo) < 0.0 && slope(hi) > 0.0)) return best.x;
    return bisect_root(slope, lo, hi, 0.0);
}

SearchConfig default_per_p_search_config(const PlantPrior& prior) {
    SearchConfig cfg = default_search_config(prior);
    if (prior.is_truncated()) {
        const double reach = std::max(std::abs(prior.lower), std::abs(prior.upper));
        cfg.bracket_lo = std::min(cfg.bracket_lo, -40.0 * (1.0 + reach));
    }
    return cfg;
}

namespace detail {

std::vector<double> induced_mesh(const PlantPrior& prior, std::size_t n_grid) {
    prior.validate();
    if (!prior.is_truncated()) throw DomainError("induced gain distribution requires a truncated prior");
    if (n_grid < 3) throw DomainError("induced gain distribution needs n_grid >= 3");
    return uniform_grid(Window{prior.lower, prior.upper}, n_grid);
}

DensityCurve assemble_induced_curve(const PlantPrior& prior, const std::vector<double>& mesh,
                                    const std::vector<double>& gains) {
    const std::size_t n = mesh.size();
    const bool decreasing = gains[1] < gains[0];
    for (std::size_t i = 1; i < n; ++i) {
        const bool ok = decreasing ? gains[i] < gains[i - 1] : gains[i] > gains[i - 1];
        if (!ok) throw MonotonicityError("per-p optimal gain is not strictly monotone on the p-mesh");
    }
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) {
        double slope;
        if (i == 0) {
            slope = (gains[1] - gains[0]) / (mesh[1] - mesh[0]);
        } else if (i + 1 == n) {
            slope = (gains[n - 1] - gains[n - 2]) / (mesh[n - 1] - mesh[n - 2]);
        } else {
            slope = (gains[i + 1] - gains[i - 1]) / (mesh[i + 1] - mesh[i - 1]);
        }
        density[i] = prior.pdf(mesh[i]) / std::abs(slope);
    }
    DensityCurve curve;
    curve.kind = DensityKind::GainDensity;
    curve.abscissae = gains;
    curve.densities = std::move(density);
    if (decreasing) {
        std::reverse(curve.abscissae.begin(), curve.abscissae.end());
        std::reverse(curve.densities.begin(), curve.densities.end());
    }
    return curve;
}

} // namespace detail

DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid) {
    return induced_gain_distribution(prior, cost, noise, n_grid, default_per_p_search_config(prior));
}

DensityCurve induced_gain_distribution(const PlantPrior& prior, const CostSpec& cost, const MeasurementNoise& noise,
                                       std::size_t n_grid, const SearchConfig& cfg) {
    const std::vector<double> mesh = detail::induced_mesh(prior, n_grid);
    cost.validate();
    noise.validate();
    cfg.validate();
    std::vector<double> gains(mesh.size(), 0.0);
    std::vector<int> failed(mesh.size(), 0);
    const auto n = static_cast<std::ptrdiff_t>(mesh.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            gains[i] = per_p_optimal_gain(mesh[i], cost, noise, cfg);
        } catch (const NumericalError&) {
            failed[i] = 1;
        }
    }
    if (std::find(failed.begin(), failed.end(), 1) != failed.end())
        throw ConvergenceError("per-p gain search failed on the p-mesh");
    return detail::assemble_induced_curve(prior, mesh, gains);
}

LaplaceFit laplace_fit(const DensityCurve& curve) {
    curve.validate();
    if (curve.size() < 3) throw LaplaceFitError("Laplace fit needs at least three points");
    const auto best = std::max_element(curve.densities.begin(), curve.densities.end());
    const auto i = static_cast<std::size_t>(best - curve.densities.begin());
    if (i == 0 || i + 1 == curve.size()) throw LaplaceFitError("density maximum lies on the curve boundary");
    if (!(curve.densities[i - 1] > 0.0) || !(curve.densities[i + 1] > 0.0))
        throw LaplaceFitError("density vanishes next to its maximum");

    const double x0 = curve.abscissae[i - 1];
    const double x1 = curve.abscissae[i];
    const double x2 = curve.abscissae[i + 1];
    const double y0 = std::log(curve.densities[i - 1]);
    const double y1 = std::log(curve.densities[i]);
    const double y2 = std::log(curve.densities[i + 1]);
    // Second divided difference = half the parabola's second derivative.
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double half_curv = (d12 - d01) / (x2 - x0);
    if (!(half_curv < 0.0)) throw LaplaceFitError("log-density curvature at the maximum is not negative");
    // Vertex of y = y1 + b (x - x1) + half_curv (x - x1)^2.
    const double b = d01 + half_curv * (x1 - x0);
    LaplaceFit fit;
    fit.mode = x1 - b / (2.0 * half_curv);
    fit.std = 1.0 / std::sqrt(-2.0 * half_curv);
    fit.density_at_mode = curve.densities[i];
    fit.curve = curve;
    return fit;
}

} // namespace bayesctl
