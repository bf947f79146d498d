#pragma once

// Domain types and the noiseless closed-form solution of the scalar
// linear-quadratic problem  dx/dt = p x + u,  u = theta x,  x(0) = 1.

#include <limits>

namespace bayesctl {

enum class PriorKind { Gaussian, TruncatedGaussian };

// Belief over the plant parameter p.
struct PlantPrior {
    double p_hat = 0.0;
    double sigma_p = 0.0;
    PriorKind kind = PriorKind::Gaussian;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    static PlantPrior gaussian(double mean, double sd);
    static PlantPrior truncated(double mean, double sd, double lo, double hi);

    // Throws DomainError naming the violated invariant.
    void validate() const;

    [[nodiscard]] bool is_truncated() const { return kind == PriorKind::TruncatedGaussian; }
    // Probability mass of the untruncated Gaussian inside [lower, upper].
    [[nodiscard]] double normalizer() const;
    [[nodiscard]] double pdf(double p) const;
    [[nodiscard]] double cdf(double p) const;
};

// Quadratic cost weights and horizon; horizon may be +inf.
struct CostSpec {
    double q = 1.0;
    double r = 1.0;
    double horizon = std::numeric_limits<double>::infinity();

    void validate() const;
    [[nodiscard]] bool finite_horizon() const { return horizon < std::numeric_limits<double>::infinity(); }
    [[nodiscard]] double q_over_r() const { return q / r; }
};

struct MeasurementNoise {
    double sigma = 0.0;
    void validate() const;
};

struct ControlGain {
    double theta = 0.0;
    [[nodiscard]] bool stabilizes(double p) const { return p + theta < 0.0; }
};

enum class GainMethod { Deterministic, Bayesian };

const char* to_string(GainMethod m);

struct GainSolution {
    ControlGain gain;
    double expected_cost = 0.0;
    GainMethod method = GainMethod::Deterministic;
    double stability_prob = 0.0;
};

// Standard normal helpers. The CDF goes through erfc so tails keep full
// relative precision.
double standard_normal_pdf(double z);
double standard_normal_cdf(double z);

// Noiseless trajectory e^{(p+theta)t}.
double closed_loop_state(double p, double theta, double t);

// -(1/4)(q + r theta^2)/(p + theta); requires p + theta < 0.
double infinite_horizon_cost(double p, double theta, const CostSpec& cost);

// g(p) = -p - sqrt(p^2 + q/r).
ControlGain deterministic_optimal_gain(double p, const CostSpec& cost);

// g^{-1}(theta) = q/(2 r theta) - theta/2; requires theta < 0.
double gain_inverse(double theta, const CostSpec& cost);

// h(p) = (r/2)(p + sqrt(p^2 + q/r)).
double optimal_cost_of_p(double p, const CostSpec& cost);

// h^{-1}(J) = J/r - q/(4J); requires J > 0.
double optimal_cost_inverse(double cost_value, const CostSpec& cost);

// P[p + theta < 0] under the prior.
double stability_probability(double theta, const PlantPrior& prior);

} // namespace bayesctl
