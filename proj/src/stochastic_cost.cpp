#include "bayesctl/stochastic_cost.hpp"

#include <cmath>
#include <limits>

#include "bayesctl/errors.hpp"

namespace bayesctl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Above this exponent phi1/phi2 are evaluated in log form.
constexpr double kLogSwitch = 600.0;

double phi1(double x) {
    if (std::abs(x) < 1e-5) return 1.0 + x * (0.5 + x / 6.0);
    return std::expm1(x) / x;
}

// (e^x - 1 - x)/x^2: power series near zero, where the subtraction cancels.
double phi2(double x) {
    if (std::abs(x) < 0.1) {
        double term = 0.5;
        double sum = term;
        for (int k = 1; k <= 12; ++k) {
            term *= x / static_cast<double>(k + 2);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(x) - x) / (x * x);
}

// Logs for large positive x.
double log_phi1_large(double x) { return x - std::log(x) + std::log1p(-std::exp(-x)); }
double log_phi2_large(double x) { return x - 2.0 * std::log(x) + std::log1p(-(1.0 + x) * std::exp(-x)); }

double log_add(double la, double lb) {
    if (la == -kInf) return lb;
    if (lb == -kInf) return la;
    const double hi = std::max(la, lb);
    return hi + std::log1p(std::exp(std::min(la, lb) - hi));
}

struct Terms {
    double c;  // q + r theta^2
    double k;  // theta^2 sigma^2
    double t;  // horizon
    double x;  // 2 T (p + theta)
};

Terms make_terms(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise) {
    if (!cost.finite_horizon()) throw DomainError("expected cost under noise requires a finite horizon T");
    const double ts = theta * noise.sigma;
    return {cost.q + cost.r * theta * theta, ts * ts, cost.horizon, 2.0 * cost.horizon * (p + theta)};
}

} // namespace

bool uses_limit_branch(double p, double theta) {
    return std::abs(p + theta) < 1e-6 * (1.0 + std::abs(theta));
}

double expected_cost_at_marginal_stability(double theta, const CostSpec& cost, const MeasurementNoise& noise) {
    const Terms tm = make_terms(-theta, theta, cost, noise);
    return tm.c * (0.5 * tm.t + 0.25 * tm.k * tm.t * tm.t);
}

double expected_cost_given_p(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise) {
    const Terms tm = make_terms(p, theta, cost, noise);
    if (uses_limit_branch(p, theta)) {
        // First-order series about p + theta = 0.
        const double x = tm.x;
        return 0.5 * tm.c * tm.t * ((1.0 + x / 2.0) + tm.k * tm.t * (0.5 + x / 6.0));
    }
    if (tm.x > kLogSwitch) {
        const double lv = log_expected_cost_given_p(p, theta, cost, noise);
        return lv > std::log(std::numeric_limits<double>::max()) ? kInf : std::exp(lv);
    }
    return 0.5 * tm.c * tm.t * (phi1(tm.x) + tm.k * tm.t * phi2(tm.x));
}

double log_expected_cost_given_p(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise) {
    const Terms tm = make_terms(p, theta, cost, noise);
    if (tm.x <= kLogSwitch) return std::log(expected_cost_given_p(p, theta, cost, noise));
    const double noise_part = tm.k > 0.0 ? std::log(tm.k * tm.t) + log_phi2_large(tm.x) : -kInf;
    return std::log(0.5 * tm.c * tm.t) + log_add(log_phi1_large(tm.x), noise_part);
}

double expected_cost_given_p_direct(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise) {
    const Terms tm = make_terms(p, theta, cost, noise);
    const double a = p + theta;
    const double decay = 1.0 - std::exp(2.0 * tm.t * a);
    return -0.25 * (tm.c / a) * (tm.k * tm.t + decay * (1.0 + 0.5 * tm.k / a));
}

double marginal_expected_cost(double theta, const PlantPrior& prior, const CostSpec& cost,
                              const MeasurementNoise& noise, const QuadratureRule& rule) {
    if (rule.kind != rule_kind_for(prior.kind))
        throw DomainError("quadrature rule kind does not match the prior");
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double w = rule.weights[i];
        if (w == 0.0) continue;
        const double p = rule.nodes[i];
        const double v = expected_cost_given_p(p, theta, cost, noise);
        acc += std::isfinite(v) ? w * v : std::exp(std::log(w) + log_expected_cost_given_p(p, theta, cost, noise));
    }
    return acc;
}

double marginal_expected_cost(double theta, const PlantPrior& prior, const CostSpec& cost,
                              const MeasurementNoise& noise) {
    const std::size_t n = default_node_count(prior.kind);
    const double coarse = marginal_expected_cost(theta, prior, cost, noise, prior_rule(prior, n));
    const double fine = marginal_expected_cost(theta, prior, cost, noise, prior_rule(prior, n + n / 2));
    if (!(std::abs(coarse - fine) <= 1e-6 * std::abs(fine)))
        throw ConvergenceError("marginal expected cost: quadrature did not converge (n vs 1.5n nodes)");
    return coarse;
}

} // namespace bayesctl
