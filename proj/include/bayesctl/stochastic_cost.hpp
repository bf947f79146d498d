#pragma once

// Expected finite-horizon cost of the noisy closed loop
//   dx = (p + theta) x dt + theta sigma dW,  x(0) = 1,
// conditioned on p, and its marginalization over the plant prior.

#include "bayesctl/model.hpp"
#include "bayesctl/quadrature.hpp"

namespace bayesctl {

// E_W[J | p]. Evaluated as (c T / 2)(phi1(x) + k T phi2(x)) with
// c = q + r theta^2, k = theta^2 sigma^2, x = 2T(p + theta),
// phi1(x) = (e^x - 1)/x and phi2(x) = (e^x - 1 - x)/x^2, which is the closed
// form rearranged to be free of cancellation. Below |p + theta| < 1e-6 (1 + |theta|)
// the series limit is used. Returns +inf when the value overflows a double;
// log_expected_cost_given_p stays finite in that regime.
double expected_cost_given_p(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise);

double log_expected_cost_given_p(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise);

// The closed form exactly as written,
//   -(1/4) c/(p+theta) [k T + (1 - e^{2T(p+theta)})(1 + k/(2(p+theta)))],
// with no branches. Undefined at p + theta = 0; used to cross-check the
// stable evaluation.
double expected_cost_given_p_direct(double p, double theta, const CostSpec& cost, const MeasurementNoise& noise);

// Value at p + theta = 0: c (T/2 + k T^2 / 4).
double expected_cost_at_marginal_stability(double theta, const CostSpec& cost, const MeasurementNoise& noise);

// True when |p + theta| is below the threshold where the series branch is taken.
bool uses_limit_branch(double p, double theta);

// sum_i w_i E_W[J | p_i] over a p-space rule built by prior_rule().
double marginal_expected_cost(double theta, const PlantPrior& prior, const CostSpec& cost,
                              const MeasurementNoise& noise, const QuadratureRule& rule);

// Same, with the default node count, cross-checked against a rule 1.5x as
// large. Throws ConvergenceError when they differ by more than 1e-6 relative.
double marginal_expected_cost(double theta, const PlantPrior& prior, const CostSpec& cost,
                              const MeasurementNoise& noise);

} // namespace bayesctl
