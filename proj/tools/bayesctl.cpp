// bayesctl: gain synthesis and robustness analysis for the scalar plant
// dx/dt = p x + u under an uncertain p and noisy state measurements.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bayesctl/config.hpp"
#include "bayesctl/errors.hpp"
#include "bayesctl/report.hpp"

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sigma_grid;
    std::optional<std::string> sigmap_grid;
    std::optional<std::string> window;
};

void add_common(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--config", flags.config, "JSON run configuration")->required();
    cmd.add_option("--out", flags.out, "Output directory (overrides output_dir)");
    cmd.add_option("--seed", flags.seed, "Monte Carlo seed (overrides seed)");
    cmd.add_option("--sigma-grid", flags.sigma_grid, "Measurement-noise grid a:b:n");
    cmd.add_option("--sigmap-grid", flags.sigmap_grid, "Prior-spread grid a:b:n");
    cmd.add_option("--window", flags.window, "Density window lo:hi");
}

bayesctl::RunConfig load(const CommonFlags& flags) {
    bayesctl::RunConfig cfg = bayesctl::parse_config(flags.config);
    if (flags.out) cfg.output_dir = *flags.out;
    if (flags.seed) cfg.sim.seed = *flags.seed;
    if (flags.sigma_grid) cfg.sigma_grid = bayesctl::parse_grid(*flags.sigma_grid);
    if (flags.sigmap_grid) cfg.sigma_p_grid = bayesctl::parse_grid(*flags.sigmap_grid);
    if (flags.window) cfg.window = bayesctl::parse_window(*flags.window);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic vs Bayesian feedback gains for an uncertain scalar plant"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string mode = "deterministic";
    std::string kind = "gain";
    double formula_scale = 1.0;

    auto* solve = app.add_subcommand("solve", "Deterministic or Bayesian optimal gain");
    add_common(*solve, flags);
    solve->add_option("--mode", mode, "deterministic|bayes")->check(CLI::IsMember({"deterministic", "bayes"}));

    auto* density = app.add_subcommand("density", "Tabulate a gain/cost/induced density as CSV");
    add_common(*density, flags);
    density->add_option("--kind", kind, "gain|cost|induced")->check(CLI::IsMember({"gain", "cost", "induced"}));

    auto* sweep = app.add_subcommand("sweep", "Optimal gain over a (sigma, sigma_p) grid");
    add_common(*sweep, flags);

    auto* validate = app.add_subcommand("validate", "Monte Carlo check of the closed-form expected cost");
    add_common(*validate, flags);
    validate->add_option("--formula-scale", formula_scale, "Scale the closed form (harness self-test)");

    auto* compare = app.add_subcommand("compare", "Deterministic vs Bayesian gain under the prior");
    add_common(*compare, flags);

    auto* laplace = app.add_subcommand("laplace", "Induced gain distribution and its Laplace fit");
    add_common(*laplace, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : bayesctl::kExitConfigError;
    }

    try {
        const bayesctl::RunConfig cfg = load(flags);
        bayesctl::CommandResult res;
        if (solve->parsed()) {
            res = bayesctl::cmd_solve(cfg, mode == "bayes" ? bayesctl::SolveMode::Bayes
                                                           : bayesctl::SolveMode::Deterministic);
        } else if (density->parsed()) {
            const auto k = kind == "gain"   ? bayesctl::DensityCommand::Gain
                           : kind == "cost" ? bayesctl::DensityCommand::Cost
                                            : bayesctl::DensityCommand::Induced;
            res = bayesctl::cmd_density(cfg, k);
        } else if (sweep->parsed()) {
            res = bayesctl::cmd_sweep(cfg);
        } else if (validate->parsed()) {
            res = bayesctl::cmd_validate(cfg, formula_scale);
        } else if (compare->parsed()) {
            res = bayesctl::cmd_compare(cfg);
        } else {
            res = bayesctl::cmd_laplace(cfg);
        }
        std::cout << res.report["result"].dump(2) << '\n';
        for (const auto& f : res.files) std::cerr << "wrote " << f.string() << '\n';
        return res.exit_code;
    } catch (const bayesctl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return bayesctl::kExitConfigError;
    } catch (const bayesctl::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return bayesctl::kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return bayesctl::kExitConfigError;
    }
}
