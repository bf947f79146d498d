#include <doctest.h>

#include <cmath>
#include <vector>

#include "bayesctl/errors.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/serial.hpp"
#include "bayesctl/stochastic_cost.hpp"

using namespace bayesctl;

TEST_CASE("config validation and step counts") {
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate(3.0));
    cfg.dt = 4.0;
    CHECK_THROWS_AS(cfg.validate(3.0), DomainError);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(3.0), DomainError);
    SimConfig none;
    none.n_paths = 0;
    CHECK_THROWS_AS(none.validate(3.0), DomainError);
    CHECK(step_count(3.0, 1e-3) == 3000);
    CHECK(step_count(1.0, 0.3) == 4);
    CHECK(step_count(2.0, 2.0) == 1);
    CHECK(std::string(to_string(Scheme::ExactTransition)) == "exact");
    CHECK(std::string(to_string(Scheme::EulerMaruyama)) == "euler_maruyama");
}

TEST_CASE("noise-free exact paths decay as e^{-t}") {
    SimConfig cfg;
    cfg.dt = 1e-2;
    const SampledPath path = simulate_path(2.0, -3.0, MeasurementNoise{0.0}, 3.0, cfg);
    REQUIRE(path.states.size() == 301);
    CHECK_FALSE(path.overflowed);
    for (std::size_t k = 0; k < path.states.size(); ++k)
        CHECK(std::abs(path.states[k] - std::exp(-path.times[k])) <= 1e-12);

    // Zero gain injects no noise regardless of sigma.
    const SampledPath open = simulate_path(-1.0, 0.0, MeasurementNoise{5.0}, 3.0, cfg);
    for (std::size_t k = 0; k < open.states.size(); ++k)
        CHECK(std::abs(open.states[k] - std::exp(-open.times[k])) <= 1e-12);
}

TEST_CASE("terminal variance of the exact transition matches the OU closed form") {
    // a = p + theta = -2, theta sigma = 1.
    SimConfig cfg;
    cfg.dt = 0.25;
    cfg.seed = 31;
    const int n = 1'000'000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = simulate_path(0.0, -2.0, MeasurementNoise{0.5}, 1.0, cfg, static_cast<std::uint64_t>(i))
                    .states.back();
    const detail::MeanSe m = detail::mean_and_se(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    const double var = ss / (n - 1);
    const double exact = (1.0 - std::exp(-4.0)) / 4.0;
    CHECK(std::abs(exact - 0.24546) < 1e-3);
    CHECK(std::abs(var - exact) <= 3.0 * exact * std::sqrt(2.0 / n));
    CHECK(std::abs(m.mean - std::exp(-2.0)) <= 3.0 * m.se);
}

TEST_CASE("deterministic cost cases") {
    SimConfig one;
    one.n_paths = 1;
    one.dt = 1e-4;
    const CostSpec t3{1.0, 1.0, 3.0};
    const CostEstimate det = estimate_cost(3.0, -6.1623, t3, MeasurementNoise{0.0}, one);
    const double a = 3.0 - 6.1623;
    const double closed = -0.25 * (1.0 + 6.1623 * 6.1623) / a * (-std::expm1(2.0 * 3.0 * a));
    CHECK(std::abs(closed - 3.0811) < 1e-3);
    CHECK(std::abs(det.mean - closed) <= 1e-3 * closed);
    CHECK(det.std_error == 0.0);

    const CostEstimate open = estimate_cost(-1.0, 0.0, CostSpec{1.0, 1.0, 2.0}, MeasurementNoise{1.0}, one);
    const double ref = (1.0 - std::exp(-4.0)) / 4.0;
    CHECK(std::abs(open.mean - ref) <= 1e-3 * ref);
}

TEST_CASE("seed determinism and serial agreement") {
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 1e-2;
    const CostSpec t3{1.0, 1.0, 3.0};
    const MeasurementNoise noise{0.3};
    const CostEstimate a = estimate_cost(3.0, -6.0, t3, noise, cfg);
    const CostEstimate b = estimate_cost(3.0, -6.0, t3, noise, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    const CostEstimate s = serial::estimate_cost(3.0, -6.0, t3, noise, cfg);
    CHECK(s.mean == a.mean);
    CHECK(s.std_error == a.std_error);
    cfg.seed += 1;
    CHECK(estimate_cost(3.0, -6.0, t3, noise, cfg).mean != a.mean);
}

TEST_CASE("Euler-Maruyama converges to the exact transition as dt shrinks") {
    const CostSpec t3{1.0, 1.0, 3.0};
    const MeasurementNoise noise{0.1};
    double prev = INFINITY;
    for (double dt : {1e-2, 1e-3, 1e-4}) {
        SimConfig cfg;
        cfg.dt = dt;
        cfg.n_paths = 2000;
        cfg.seed = 77;
        const CostEstimate exact = estimate_cost(3.0, -6.1623, t3, noise, cfg);
        cfg.scheme = Scheme::EulerMaruyama;
        const CostEstimate em = estimate_cost(3.0, -6.1623, t3, noise, cfg);
        const double diff = std::abs(em.mean - exact.mean);
        CHECK(diff < prev);
        prev = diff;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("Monte Carlo agrees with the closed form across regimes") {
    SimConfig cfg;
    cfg.dt = 1e-2;
    cfg.n_paths = 50000;
    struct Case {
        double p, theta, sigma, T;
    };
    for (const Case c : {Case{3.0, -6.1623, 0.1, 3.0}, Case{1.0, -1.0, 1.0, 2.0}, Case{1.0, -2.0, 0.8, 1.5},
                         Case{0.5, -0.3, 0.5, 1.0}}) {
        const CostSpec cost{1.0, 1.0, c.T};
        const MeasurementNoise noise{c.sigma};
        const CostEstimate mc = estimate_cost(c.p, c.theta, cost, noise, cfg);
        const double closed = expected_cost_given_p(c.p, c.theta, cost, noise);
        CHECK(std::abs(mc.mean - closed) <= 3.0 * mc.std_error);
    }
}

TEST_CASE("martingale and isometry properties of the stochastic convolution") {
    SimConfig cfg;
    cfg.n_paths = 50000;
    cfg.dt = 1e-3;
    for (double a : {-1.0, 0.0, 0.5}) {
        const IntegralMoments m = stochastic_integral_moments(a, 0.0, 1.0, cfg);
        CHECK(std::abs(m.terminal_mean) <= 3.0 * m.terminal_mean_se);
        CHECK(std::abs(m.cross_mean) <= 3.0 * m.cross_mean_se);
        const double iso = a == 0.0 ? 1.0 : std::expm1(2.0 * a) / (2.0 * a);
        CHECK(m.isometry_value == doctest::Approx(iso).epsilon(1e-12));
        CHECK(std::abs(m.terminal_second_moment - iso) <= 3.0 * m.terminal_second_moment_se);
    }
}

TEST_CASE("diverging paths are flagged") {
    SimConfig cfg;
    cfg.n_paths = 10;
    cfg.dt = 1e-2;
    const CostEstimate est = estimate_cost(5.0, 1.0, CostSpec{1.0, 1.0, 100.0}, MeasurementNoise{0.1}, cfg);
    CHECK(est.n_overflowed == 10);
    CHECK(est.n_paths == 0);
    const SampledPath path = simulate_path(5.0, 1.0, MeasurementNoise{0.1}, 100.0, cfg);
    CHECK(path.overflowed);
    CHECK_THROWS_AS(estimate_cost(3.0, -6.0, CostSpec{1.0, 1.0, INFINITY}, MeasurementNoise{0.1}, cfg),
                    DomainError);
}
