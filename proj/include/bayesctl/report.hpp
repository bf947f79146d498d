#pragma once

// Command implementations behind the CLI. Each command writes its CSV/JSON
// artifacts into cfg.output_dir and returns the JSON report it wrote.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bayesctl/config.hpp"
#include "bayesctl/gain_search.hpp"
#include "bayesctl/pushforward.hpp"

namespace bayesctl {

inline constexpr const char* kReportSchema = "bayesctl.report/1";

enum class SolveMode { Deterministic, Bayes };
enum class DensityCommand { Gain, Cost, Induced };

struct CommandResult {
    nlohmann::json report;
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
};

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumerical = 3;

// Shortest round-trip decimal ("nan"/"inf"/"-inf" for non-finite values).
std::string format_double(double value);

std::string density_csv(const DensityCurve& curve);
std::string sweep_csv(const SweepGrid& grid);

CommandResult cmd_solve(const RunConfig& cfg, SolveMode mode);
CommandResult cmd_density(const RunConfig& cfg, DensityCommand kind);
CommandResult cmd_sweep(const RunConfig& cfg);
// formula_scale multiplies the closed form before comparison; values other
// than 1 exist only to check that the harness can fail.
CommandResult cmd_validate(const RunConfig& cfg, double formula_scale = 1.0);
CommandResult cmd_compare(const RunConfig& cfg);
CommandResult cmd_laplace(const RunConfig& cfg);

} // namespace bayesctl
