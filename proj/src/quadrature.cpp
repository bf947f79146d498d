#include "bayesctl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bayesctl/errors.hpp"

namespace bayesctl {

namespace {

constexpr int kMaxNewton = 100;

// Physicists' Gauss-Hermite (weight e^{-x^2}) by Newton iteration on the
// orthonormal three-term recurrence. Weights come out as 2/H'^2 which keeps
// relative accuracy for the tiny weights of the outer nodes.
void hermite_physicists(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
    const std::size_t m = (n + 1) / 2;
    const double dn = static_cast<double>(n);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(dn, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * x[1];
        } else {
            z = 2.0 * z - x[i - 2];
        }
        double pp = 0.0;
        int it = 0;
        for (; it < kMaxNewton; ++it) {
            double p1 = pim4;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double dj = static_cast<double>(j);
                p1 = z * std::sqrt(2.0 / dj) * p2 - std::sqrt((dj - 1.0) / dj) * p3;
            }
            pp = std::sqrt(2.0 * dn) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        if (it == kMaxNewton) throw ConvergenceError("Gauss-Hermite node iteration did not converge");
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace

QuadratureRule gauss_hermite(std::size_t n) {
    if (n == 0) throw DomainError("quadrature rule needs at least one node");
    std::vector<double> x, w;
    hermite_physicists(n, x, w);
    QuadratureRule rule;
    rule.kind = RuleKind::GaussHermite;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // x was filled largest first.
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
        rule.weights[i] = w[n - 1 - i] / std::sqrt(std::numbers::pi);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw DomainError("quadrature rule needs at least one node");
    if (!(a < b)) throw DomainError("gauss_legendre requires a < b");
    QuadratureRule rule;
    rule.kind = RuleKind::GaussLegendre;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double dn = static_cast<double>(n);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double pp = 0.0;
        int it = 0;
        for (; it < kMaxNewton; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                const double dj = static_cast<double>(j);
                p1 = ((2.0 * dj - 1.0) * z * p2 - (dj - 1.0) * p3) / dj;
            }
            pp = dn * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        if (it == kMaxNewton) throw ConvergenceError("Gauss-Legendre node iteration did not converge");
        const double weight = 2.0 * half / ((1.0 - z * z) * pp * pp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[n - 1 - i] = mid + half * z;
        rule.weights[i] = weight;
        rule.weights[n - 1 - i] = weight;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = mid;
    return rule;
}

QuadratureRule prior_rule(const PlantPrior& prior, std::size_t n) {
    prior.validate();
    if (prior.kind == PriorKind::Gaussian) {
        QuadratureRule rule = gauss_hermite(n);
        for (double& node : rule.nodes) node = prior.p_hat + prior.sigma_p * node;
        return rule;
    }
    QuadratureRule rule = gauss_legendre(n, prior.lower, prior.upper);
    for (std::size_t i = 0; i < n; ++i) rule.weights[i] *= prior.pdf(rule.nodes[i]);
    return rule;
}

std::size_t default_node_count(PriorKind kind) {
    return kind == PriorKind::Gaussian ? 80 : 200;
}

std::size_t check_node_count(PriorKind kind) {
    return kind == PriorKind::Gaussian ? 120 : 300;
}

} // namespace bayesctl
