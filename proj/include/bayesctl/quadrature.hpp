#pragma once

#include <cstddef>
#include <vector>

#include "bayesctl/model.hpp"

namespace bayesctl {

enum class RuleKind { GaussHermite, GaussLegendre };

// Nodes ascending. A rule produced by prior_rule() carries probability
// weights in p-space, so sum_i w_i f(p_i) approximates E_prior[f(p)].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    RuleKind kind = RuleKind::GaussHermite;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

// Probabilists' Gauss-Hermite rule for E[f(Z)], Z ~ N(0, 1); weights sum to 1.
QuadratureRule gauss_hermite(std::size_t n);

// Gauss-Legendre rule for the plain integral over [a, b].
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// Rule for expectations under the prior: Gauss-Hermite mapped through
// p = p_hat + sigma_p z for Gaussian priors, Gauss-Legendre on the support
// weighted by the truncated density otherwise.
QuadratureRule prior_rule(const PlantPrior& prior, std::size_t n);

// Default node count and the count used to cross-check convergence.
std::size_t default_node_count(PriorKind kind);
std::size_t check_node_count(PriorKind kind);

inline RuleKind rule_kind_for(PriorKind kind) {
    return kind == PriorKind::Gaussian ? RuleKind::GaussHermite : RuleKind::GaussLegendre;
}

// sum_i w_i f(x_i) in ascending node order.
template <typename F>
double integrate(const QuadratureRule& rule, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

} // namespace bayesctl
