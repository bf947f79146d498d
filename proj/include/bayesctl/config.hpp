#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bayesctl/gain_search.hpp"
#include "bayesctl/mc_oracle.hpp"
#include "bayesctl/model.hpp"
#include "bayesctl/pushforward.hpp"

namespace bayesctl {

constexpr int kConfigSchema = 1;

// Inclusive linear grid "a:b:n".
struct GridSpec {
    double first = 0.0;
    double last = 1.5;
    std::size_t count = 11;

    [[nodiscard]] std::vector<double> values() const;
    [[nodiscard]] std::string to_string() const;
};

GridSpec parse_grid(std::string_view text);
Window parse_window(std::string_view text);

struct RunConfig {
    PlantPrior plant;
    CostSpec cost;
    MeasurementNoise noise;
    SearchConfig search;
    bool search_bracket_explicit = false;
    SimConfig sim;
    std::optional<double> theta;
    GridSpec sigma_grid;
    GridSpec sigma_p_grid;
    std::optional<Window> window;
    std::size_t n_points = kDefaultDensityPoints;
    std::size_t n_grid = 401;
    std::filesystem::path output_dir = "out";

    // Search settings for a given prior: the explicit bracket when one was
    // configured, the sigma_p-scaled default otherwise.
    [[nodiscard]] SearchConfig search_for(const PlantPrior& prior) const;
};

// Throws ConfigError with a field or line/column diagnostic.
RunConfig parse_config(const std::filesystem::path& file);
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config_json(const nlohmann::json& doc);

// Fully resolved config (defaults filled in), suitable for report echoes.
nlohmann::json to_json(const RunConfig& cfg);

} // namespace bayesctl
