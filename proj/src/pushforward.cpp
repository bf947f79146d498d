#include "bayesctl/pushforward.hpp"

#include <cmath>
#include <string>

#include "bayesctl/errors.hpp"
#include "bayesctl/quadrature.hpp"

namespace bayesctl {

namespace detail {

std::vector<double> uniform_grid(const Window& window, std::size_t n_points) {
    if (n_points < 2) throw DomainError("density grid needs at least two points");
    if (!(window.lo < window.hi)) throw DomainError("window requires lo < hi");
    std::vector<double> grid(n_points);
    const double step = (window.hi - window.lo) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) grid[i] = window.lo + step * static_cast<double>(i);
    grid.back() = window.hi;
    return grid;
}

void require_density_inputs(const PlantPrior& prior, const CostSpec& cost) {
    prior.validate();
    cost.validate();
    if (prior.kind != PriorKind::Gaussian) throw DomainError("analytic pushforward requires a Gaussian prior");
    if (!(prior.sigma_p > 0.0)) throw DomainError("analytic pushforward requires sigma_p > 0");
    if (!(cost.q > 0.0)) throw DomainError("analytic pushforward requires q > 0");
}

} // namespace detail

namespace {

template <typename F>
double checked_expectation(const PlantPrior& prior, F&& f, const char* what) {
    const QuadratureRule coarse = prior_rule(prior, default_node_count(PriorKind::Gaussian));
    const QuadratureRule fine = prior_rule(prior, check_node_count(PriorKind::Gaussian));
    const double a = integrate(coarse, f);
    const double b = integrate(fine, f);
    if (std::abs(a - b) > 1e-8 * std::max(std::abs(a), std::abs(b)))
        throw ConvergenceError(std::string(what) + ": quadrature node counts disagree");
    return a;
}

void require_moment_inputs(const PlantPrior& prior, const CostSpec& cost) {
    prior.validate();
    cost.validate();
    if (prior.kind != PriorKind::Gaussian) throw DomainError("moment quadrature requires a Gaussian prior");
    if (!(cost.q > 0.0)) throw DomainError("moments require q > 0");
}

} // namespace

double DensityCurve::trapezoid() const {
    double acc = 0.0;
    for (std::size_t i = 1; i < size(); ++i)
        acc += 0.5 * (densities[i] + densities[i - 1]) * (abscissae[i] - abscissae[i - 1]);
    return acc;
}

void DensityCurve::validate() const {
    if (abscissae.size() != densities.size()) throw DomainError("density curve columns differ in length");
    for (std::size_t i = 1; i < size(); ++i)
        if (!(abscissae[i] > abscissae[i - 1])) throw DomainError("density abscissae must be strictly increasing");
    for (double d : densities)
        if (!(d >= 0.0)) throw DomainError("densities must be nonnegative");
}

double gain_density(double theta, const PlantPrior& prior, const CostSpec& cost) {
    detail::require_density_inputs(prior, cost);
    if (!(theta < 0.0)) throw DomainError("gain_density requires theta < 0");
    const double jacobian = 0.5 * (1.0 + cost.q_over_r() / (theta * theta));
    return prior.pdf(gain_inverse(theta, cost)) * jacobian;
}

double cost_density(double cost_value, const PlantPrior& prior, const CostSpec& cost) {
    detail::require_density_inputs(prior, cost);
    if (!(cost_value > 0.0)) throw DomainError("cost_density requires J > 0");
    const double jacobian = 1.0 / cost.r + cost.q / (4.0 * cost_value * cost_value);
    return prior.pdf(optimal_cost_inverse(cost_value, cost)) * jacobian;
}

double gain_mean(const PlantPrior& prior, const CostSpec& cost) {
    require_moment_inputs(prior, cost);
    return checked_expectation(
        prior, [&](double p) { return deterministic_optimal_gain(p, cost).theta; }, "gain_mean");
}

double cost_mean(const PlantPrior& prior, const CostSpec& cost) {
    require_moment_inputs(prior, cost);
    return checked_expectation(prior, [&](double p) { return optimal_cost_of_p(p, cost); }, "cost_mean");
}

Window default_gain_window(const PlantPrior& prior, const CostSpec& cost, double sigmas) {
    const double spread = sigmas * prior.sigma_p;
    return {deterministic_optimal_gain(prior.p_hat + spread, cost).theta,
            deterministic_optimal_gain(prior.p_hat - spread, cost).theta};
}

Window default_cost_window(const PlantPrior& prior, const CostSpec& cost, double sigmas) {
    const double spread = sigmas * prior.sigma_p;
    return {optimal_cost_of_p(prior.p_hat - spread, cost), optimal_cost_of_p(prior.p_hat + spread, cost)};
}

DensityCurve sample_gain_density(const PlantPrior& prior, const CostSpec& cost, std::size_t n_points,
                                 std::optional<Window> window) {
    detail::require_density_inputs(prior, cost);
    DensityCurve curve;
    curve.kind = DensityKind::GainDensity;
    curve.abscissae = detail::uniform_grid(window.value_or(default_gain_window(prior, cost)), n_points);
    if (curve.abscissae.back() >= 0.0) throw DomainError("gain window must lie in theta < 0");
    curve.densities.assign(n_points, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(n_points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        curve.densities[i] = gain_density(curve.abscissae[i], prior, cost);
    return curve;
}

DensityCurve sample_cost_density(const PlantPrior& prior, const CostSpec& cost, std::size_t n_points,
                                 std::optional<Window> window) {
    detail::require_density_inputs(prior, cost);
    DensityCurve curve;
    curve.kind = DensityKind::CostDensity;
    curve.abscissae = detail::uniform_grid(window.value_or(default_cost_window(prior, cost)), n_points);
    if (curve.abscissae.front() <= 0.0) throw DomainError("cost window must lie in J > 0");
    curve.densities.assign(n_points, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(n_points);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        curve.densities[i] = cost_density(curve.abscissae[i], prior, cost);
    return curve;
}

} // namespace bayesctl
