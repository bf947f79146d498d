#include <doctest.h>

#include <cmath>
#include <random>

#include "bayesctl/errors.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/quadrature.hpp"
#include "bayesctl/stochastic_cost.hpp"
#include "oracles.hpp"

using namespace bayesctl;

namespace {
const CostSpec kUnitT3{1.0, 1.0, 3.0};
const MeasurementNoise kNoise{0.1};
} // namespace

TEST_CASE("noise-free cost is the infinite-horizon cost times the transient factor") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> up(-10.0, 10.0), ua(-8.0, -1e-3), ut(0.05, 20.0), uq(0.01, 10.0);
    int worst_ok = 0;
    for (int i = 0; i < 1000; ++i) {
        const double p = up(rng);
        const double theta = ua(rng) - p;
        const CostSpec cost{uq(rng), uq(rng), ut(rng)};
        if (uses_limit_branch(p, theta)) continue;
        const double ref = infinite_horizon_cost(p, theta, cost) *
                           (-std::expm1(2.0 * cost.horizon * (p + theta)));
        const double got = expected_cost_given_p(p, theta, cost, MeasurementNoise{0.0});
        if (std::abs(got - ref) <= 1e-12 * ref) ++worst_ok;
    }
    CHECK(worst_ok == 1000);
    // Long horizon recovers the infinite-horizon value.
    const CostSpec t10{1.0, 1.0, 10.0};
    const double theta = deterministic_optimal_gain(3.0, t10).theta;
    CHECK(std::abs(expected_cost_given_p(3.0, theta, t10, MeasurementNoise{0.0}) - 3.081) < 1e-3);
}

TEST_CASE("stable evaluation agrees with the literal closed form") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> up(-5.0, 5.0), ua(-6.0, 6.0), ut(0.1, 5.0), us(0.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const double p = up(rng);
        double a = ua(rng);
        if (std::abs(a) < 0.05) a = 0.05;
        const double theta = a - p;
        const CostSpec cost{1.0, 0.5, ut(rng)};
        const MeasurementNoise noise{us(rng)};
        const double ref = oracle::lemma_cost(p, theta, cost.q, cost.r, cost.horizon, noise.sigma);
        CHECK(expected_cost_given_p(p, theta, cost, noise) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(expected_cost_given_p_direct(p, theta, cost, noise) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("limit branch at marginal stability") {
    const CostSpec cost{1.0, 1.0, 2.0};
    const MeasurementNoise noise{1.0};
    CHECK(uses_limit_branch(1.0, -1.0));
    CHECK(expected_cost_given_p(1.0, -1.0, cost, noise) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(expected_cost_at_marginal_stability(-1.0, cost, noise) == doctest::Approx(4.0).epsilon(1e-14));
    for (double d : {-1e-6, 1e-6}) {
        const double lit = oracle::lemma_cost(1.0 + d, -1.0, 1.0, 1.0, 2.0, 1.0);
        CHECK(std::abs(lit - 4.0) < 1e-4 * 4.0);
    }
    // Numeric limit of the literal form from further out.
    const double left = oracle::lemma_cost(1.0 - 1e-3, -1.0, 1.0, 1.0, 2.0, 1.0);
    const double right = oracle::lemma_cost(1.0 + 1e-3, -1.0, 1.0, 1.0, 2.0, 1.0);
    CHECK(0.5 * (left + right) == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("continuity across the singularity for random parameters") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ut(-5.0, -0.1), us(0.0, 2.0), uT(0.1, 5.0), uq(0.1, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double theta = ut(rng);
        const CostSpec cost{uq(rng), uq(rng), uT(rng)};
        const MeasurementNoise noise{us(rng)};
        const double limit = expected_cost_at_marginal_stability(theta, cost, noise);
        for (double d : {-1e-6, 1e-6}) {
            const double p = -theta + d * (1.0 + std::abs(theta)) * 1.5;
            const double v = expected_cost_given_p(p, theta, cost, noise);
            CHECK(std::abs(v - limit) < 1e-4 * limit);
        }
    }
}

TEST_CASE("positivity, noise monotonicity, horizon divergence") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> up(-10.0, 10.0), ut(-20.0, 5.0), uT(0.01, 20.0), us(0.0, 3.0),
        uq(0.0, 5.0), ur(0.01, 5.0);
    int positive = 0;
    for (int i = 0; i < 10000; ++i) {
        const double p = up(rng);
        double theta = ut(rng);
        if (theta == 0.0) theta = -1.0;
        const CostSpec cost{uq(rng), ur(rng), uT(rng)};
        const MeasurementNoise noise{us(rng)};
        if (log_expected_cost_given_p(p, theta, cost, noise) > -1e300 &&
            expected_cost_given_p(p, theta, cost, noise) > 0.0)
            ++positive;
    }
    CHECK(positive == 10000);

    for (double a : {-3.0, -1.0, -0.2}) {
        const double p = 2.0;
        const double theta = a - p;
        double prev = 0.0;
        for (double s = 0.0; s <= 2.0; s += 0.1) {
            const double v = expected_cost_given_p(p, theta, kUnitT3, MeasurementNoise{s});
            CHECK(v >= prev);
            prev = v;
        }
        const auto at = [&](double T) { return expected_cost_given_p(p, theta, CostSpec{1, 1, T}, kNoise); };
        CHECK(at(100.0) > at(10.0));
        CHECK(at(10.0) > at(1.0));
    }
}

TEST_CASE("log-space evaluation in the overflow regime") {
    const CostSpec cost{1.0, 1.0, 50.0};
    const double v = expected_cost_given_p(20.0, -1.0, cost, kNoise);
    CHECK(std::isinf(v));
    const double lv = log_expected_cost_given_p(20.0, -1.0, cost, kNoise);
    CHECK(std::isfinite(lv));
    // log of the dominant term c k T e^x / (2 x^2) ... of (c T / 2)(phi1 + k T phi2).
    const double x = 2.0 * 50.0 * 19.0;
    const double c = 2.0, k = 0.01;
    const double ref = std::log(c * 50.0 / 2.0) + x + std::log(1.0 / x + k * 50.0 / (x * x));
    CHECK(lv == doctest::Approx(ref).epsilon(1e-10));
    // Away from overflow the two agree.
    CHECK(log_expected_cost_given_p(3.0, -6.0, kUnitT3, kNoise) ==
          doctest::Approx(std::log(expected_cost_given_p(3.0, -6.0, kUnitT3, kNoise))).epsilon(1e-14));
}

TEST_CASE("closed form agrees with Monte Carlo at a stable reference point") {
    SimConfig sim;
    sim.dt = 1e-2;
    sim.n_paths = 200000;
    sim.seed = 4242;
    const CostEstimate mc = estimate_cost(3.0, -6.1623, kUnitT3, kNoise, sim);
    const double closed = expected_cost_given_p(3.0, -6.1623, kUnitT3, kNoise);
    CHECK(std::abs(mc.mean - closed) <= 3.0 * mc.std_error);
}

TEST_CASE("marginal expected cost") {
    const PlantPrior prior = PlantPrior::gaussian(3.0, 0.6);
    const double checked = marginal_expected_cost(-6.162, prior, kUnitT3, kNoise);
    // Independent adaptive quadrature over p.
    const double ref = oracle::adaptive_simpson(
        [&](double p) {
            return oracle::lemma_cost(p, -6.162, 1, 1, 3, 0.1) * oracle::normal_pdf(p, 3.0, 0.6);
        },
        3.0 - 12 * 0.6, 3.0 + 12 * 0.6, 1e-12, 256);
    CHECK(checked == doctest::Approx(ref).epsilon(1e-8));
    CHECK(std::isfinite(checked));

    const double point = marginal_expected_cost(-6.1623, PlantPrior::gaussian(3.0, 0.0), kUnitT3, kNoise);
    CHECK(point == doctest::Approx(expected_cost_given_p(3.0, -6.1623, kUnitT3, kNoise)).epsilon(1e-14));

    const CostSpec t10{1.0, 1.0, 10.0};
    const double theta = deterministic_optimal_gain(3.0, t10).theta;
    CHECK(std::abs(marginal_expected_cost(theta, PlantPrior::gaussian(3.0, 0.0), t10, MeasurementNoise{0}) -
                   3.081) < 1e-3);

    const PlantPrior trunc = PlantPrior::truncated(3.0, 2.0, 0.0, 6.0);
    const double tref = oracle::adaptive_simpson(
                            [&](double p) {
                                return oracle::lemma_cost(p, -6.162, 1, 1, 3, 0.1) *
                                       oracle::normal_pdf(p, 3.0, 2.0);
                            },
                            0.0, 6.0, 1e-12, 256) /
                        (oracle::normal_cdf(1.5) - oracle::normal_cdf(-1.5));
    CHECK(marginal_expected_cost(-6.162, trunc, kUnitT3, kNoise) == doctest::Approx(tref).epsilon(1e-8));

    CHECK_THROWS_AS(marginal_expected_cost(-6.0, trunc, kUnitT3, kNoise, gauss_hermite(80)), DomainError);
    CHECK_THROWS_AS(marginal_expected_cost(-6.0, prior, CostSpec{1, 1, INFINITY}, kNoise), DomainError);
    CHECK_THROWS_AS(expected_cost_given_p(3.0, -6.0, CostSpec{1, 1, INFINITY}, kNoise), DomainError);
}

TEST_CASE("wide prior still converges through the unstable tail") {
    const PlantPrior prior = PlantPrior::gaussian(3.0, 2.0);
    const double v = marginal_expected_cost(-15.0, prior, kUnitT3, kNoise);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
}
