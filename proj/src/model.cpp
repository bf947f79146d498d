#include "bayesctl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bayesctl/errors.hpp"

namespace bayesctl {

namespace {

// sqrt(p^2 + c) - p without cancellation for p > 0 (and the symmetric case).
// Returns the pair (p + s, s - p) where s = sqrt(p^2 + c).
struct SurdParts {
    double plus;   // p + s
    double minus;  // s - p
};

SurdParts surd_parts(double p, double c) {
    const double s = std::sqrt(p * p + c);
    if (p >= 0.0) {
        const double plus = p + s;
        return {plus, plus > 0.0 ? c / plus : 0.0};
    }
    const double minus = s - p;
    return {minus > 0.0 ? c / minus : 0.0, minus};
}

} // namespace

PlantPrior PlantPrior::gaussian(double mean, double sd) {
    PlantPrior prior;
    prior.p_hat = mean;
    prior.sigma_p = sd;
    prior.kind = PriorKind::Gaussian;
    prior.validate();
    return prior;
}

PlantPrior PlantPrior::truncated(double mean, double sd, double lo, double hi) {
    PlantPrior prior;
    prior.p_hat = mean;
    prior.sigma_p = sd;
    prior.kind = PriorKind::TruncatedGaussian;
    prior.lower = lo;
    prior.upper = hi;
    prior.validate();
    return prior;
}

void PlantPrior::validate() const {
    if (!std::isfinite(p_hat)) throw DomainError("p_hat must be finite");
    if (!(sigma_p >= 0.0) || !std::isfinite(sigma_p)) throw DomainError("sigma_p must be >= 0");
    if (kind == PriorKind::TruncatedGaussian) {
        if (!(lower < upper)) throw DomainError("lower < upper");
        if (!std::isfinite(lower) || !std::isfinite(upper))
            throw DomainError("truncated prior requires finite bounds");
        if (p_hat < lower || p_hat > upper) throw DomainError("p_hat must lie in [lower, upper]");
        if (!(sigma_p > 0.0)) throw DomainError("truncated prior requires sigma_p > 0");
    }
}

double PlantPrior::normalizer() const {
    if (kind == PriorKind::Gaussian) return 1.0;
    const double a = (lower - p_hat) / sigma_p;
    const double b = (upper - p_hat) / sigma_p;
    // Difference of upper tails keeps precision when both bounds sit above the mean.
    if (a > 0.0) return standard_normal_cdf(-a) - standard_normal_cdf(-b);
    return standard_normal_cdf(b) - standard_normal_cdf(a);
}

double PlantPrior::pdf(double p) const {
    if (!(sigma_p > 0.0)) throw DomainError("density of a degenerate prior (sigma_p = 0) is undefined");
    if (kind == PriorKind::TruncatedGaussian && (p < lower || p > upper)) return 0.0;
    const double z = (p - p_hat) / sigma_p;
    return standard_normal_pdf(z) / (sigma_p * normalizer());
}

double PlantPrior::cdf(double p) const {
    if (kind == PriorKind::Gaussian) {
        if (sigma_p == 0.0) return p > p_hat ? 1.0 : 0.0;
        return standard_normal_cdf((p - p_hat) / sigma_p);
    }
    if (p <= lower) return 0.0;
    if (p >= upper) return 1.0;
    const double a = (lower - p_hat) / sigma_p;
    const double z = (p - p_hat) / sigma_p;
    double mass;
    if (a > 0.0) {
        mass = standard_normal_cdf(-a) - standard_normal_cdf(-z);
    } else {
        mass = standard_normal_cdf(z) - standard_normal_cdf(a);
    }
    return std::clamp(mass / normalizer(), 0.0, 1.0);
}

void CostSpec::validate() const {
    if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("q must be >= 0");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("r must be positive");
    if (!(horizon > 0.0)) throw DomainError("T must be positive");
}

void MeasurementNoise::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be >= 0");
}

const char* to_string(GainMethod m) {
    return m == GainMethod::Deterministic ? "deterministic" : "bayesian";
}

double standard_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double standard_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double closed_loop_state(double p, double theta, double t) {
    if (!(t >= 0.0)) throw DomainError("closed_loop_state requires t >= 0");
    return std::exp((p + theta) * t);
}

double infinite_horizon_cost(double p, double theta, const CostSpec& cost) {
    const double a = p + theta;
    if (!(a < 0.0))
        throw DomainError("infinite-horizon cost diverges: closed loop unstable (p + theta >= 0)");
    return -0.25 * (cost.q + cost.r * theta * theta) / a;
}

ControlGain deterministic_optimal_gain(double p, const CostSpec& cost) {
    return ControlGain{-surd_parts(p, cost.q_over_r()).plus};
}

double gain_inverse(double theta, const CostSpec& cost) {
    if (!(theta < 0.0)) throw DomainError("gain_inverse requires theta < 0");
    return (cost.q_over_r() - theta * theta) / (2.0 * theta);
}

double optimal_cost_of_p(double p, const CostSpec& cost) {
    return 0.5 * cost.r * surd_parts(p, cost.q_over_r()).plus;
}

double optimal_cost_inverse(double cost_value, const CostSpec& cost) {
    if (!(cost_value > 0.0)) throw DomainError("optimal_cost_inverse requires J > 0");
    return cost_value / cost.r - cost.q / (4.0 * cost_value);
}

double stability_probability(double theta, const PlantPrior& prior) {
    return std::clamp(prior.cdf(-theta), 0.0, 1.0);
}

} // namespace bayesctl
