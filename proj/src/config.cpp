#include "bayesctl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "bayesctl/errors.hpp"

namespace bayesctl {

namespace {

using nlohmann::json;

const std::set<std::string>& known_fields() {
    static const std::set<std::string> fields = {
        "schema", "p_hat",    "sigma_p",    "kind",      "lower",        "upper",   "q",        "r",
        "T",      "sigma",    "bracket_lo", "bracket_hi", "tol_theta",   "max_iters", "dt",     "n_paths",
        "seed",   "scheme",   "theta",      "sigma_grid", "sigma_p_grid", "window",  "n_points", "n_grid",
        "output_dir"};
    return fields;
}

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError("malformed " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split_colon(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(':', start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double number_field(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

std::string string_field(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_string()) throw ConfigError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t unsigned_field(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(std::string("field '") + key + "' must be a nonnegative integer");
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << col;
    return os.str();
}

void rethrow_as_config(const std::exception& e) { throw ConfigError(e.what()); }

} // namespace

std::vector<double> GridSpec::values() const {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = first;
        return out;
    }
    const double step = (last - first) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + step * static_cast<double>(i);
    out.back() = last;
    return out;
}

std::string GridSpec::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << first << ':' << last << ':' << count;
    return os.str();
}

GridSpec parse_grid(std::string_view text) {
    const auto parts = split_colon(text);
    if (parts.size() != 3) throw ConfigError("grid must be 'a:b:n', got '" + std::string(text) + "'");
    GridSpec grid;
    grid.first = parse_number(parts[0], "grid start");
    grid.last = parse_number(parts[1], "grid end");
    const double n = parse_number(parts[2], "grid count");
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("grid count must be a positive integer");
    grid.count = static_cast<std::size_t>(n);
    if (!(grid.first >= 0.0)) throw ConfigError("grid values must be >= 0");
    if (grid.count > 1 && !(grid.last > grid.first)) throw ConfigError("grid requires a < b");
    return grid;
}

Window parse_window(std::string_view text) {
    const auto parts = split_colon(text);
    if (parts.size() != 2) throw ConfigError("window must be 'lo:hi', got '" + std::string(text) + "'");
    Window w{parse_number(parts[0], "window lo"), parse_number(parts[1], "window hi")};
    if (!(w.lo < w.hi)) throw ConfigError("window requires lo < hi");
    return w;
}

SearchConfig RunConfig::search_for(const PlantPrior& prior) const {
    if (search_bracket_explicit) return search;
    SearchConfig cfg = default_search_config(prior);
    cfg.tol_theta = search.tol_theta;
    cfg.max_iters = search.max_iters;
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " +
                          e.what());
    }
    return parse_config_json(doc);
}

RunConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& item : doc.items())
        if (!known_fields().contains(item.key())) throw ConfigError("unknown field '" + item.key() + "'");

    RunConfig cfg;
    auto has = [&](const char* key) { return doc.contains(key); };

    if (has("schema")) {
        if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kConfigSchema)
            throw ConfigError("unsupported schema version (expected 1)");
    }

    // Plant prior.
    if (has("sigma_p")) cfg.plant.sigma_p = number_field(doc, "sigma_p");
    if (has("kind")) {
        const std::string kind = string_field(doc, "kind");
        if (kind == "gaussian") {
            cfg.plant.kind = PriorKind::Gaussian;
        } else if (kind == "truncated") {
            cfg.plant.kind = PriorKind::TruncatedGaussian;
        } else {
            throw ConfigError("kind must be 'gaussian' or 'truncated'");
        }
    }
    if (has("lower")) cfg.plant.lower = number_field(doc, "lower");
    if (has("upper")) cfg.plant.upper = number_field(doc, "upper");

    // Cost and noise.
    if (has("q")) cfg.cost.q = number_field(doc, "q");
    if (has("r")) cfg.cost.r = number_field(doc, "r");
    if (has("T")) {
        const json& t = doc["T"];
        if (t.is_string() && (t.get<std::string>() == "inf" || t.get<std::string>() == "infinity")) {
            cfg.cost.horizon = std::numeric_limits<double>::infinity();
        } else if (t.is_number()) {
            cfg.cost.horizon = t.get<double>();
        } else {
            throw ConfigError("field 'T' must be a number or \"inf\"");
        }
    }
    if (has("sigma")) cfg.noise.sigma = number_field(doc, "sigma");

    // Search.
    if (has("bracket_lo") != has("bracket_hi")) throw ConfigError("bracket_lo and bracket_hi must be given together");
    if (has("bracket_lo")) {
        cfg.search.bracket_lo = number_field(doc, "bracket_lo");
        cfg.search.bracket_hi = number_field(doc, "bracket_hi");
        cfg.search_bracket_explicit = true;
    }
    if (has("tol_theta")) cfg.search.tol_theta = number_field(doc, "tol_theta");
    if (has("max_iters")) cfg.search.max_iters = static_cast<int>(unsigned_field(doc, "max_iters"));

    // Simulation.
    if (has("dt")) cfg.sim.dt = number_field(doc, "dt");
    if (has("n_paths")) cfg.sim.n_paths = static_cast<std::int64_t>(unsigned_field(doc, "n_paths"));
    if (has("seed")) cfg.sim.seed = unsigned_field(doc, "seed");
    if (has("scheme")) {
        const std::string scheme = string_field(doc, "scheme");
        if (scheme == "exact") {
            cfg.sim.scheme = Scheme::ExactTransition;
        } else if (scheme == "euler_maruyama") {
            cfg.sim.scheme = Scheme::EulerMaruyama;
        } else {
            throw ConfigError("scheme must be 'exact' or 'euler_maruyama'");
        }
    }

    // Commands.
    if (has("theta")) cfg.theta = number_field(doc, "theta");
    if (has("sigma_grid")) cfg.sigma_grid = parse_grid(string_field(doc, "sigma_grid"));
    if (has("sigma_p_grid")) cfg.sigma_p_grid = parse_grid(string_field(doc, "sigma_p_grid"));
    if (has("window")) cfg.window = parse_window(string_field(doc, "window"));
    if (has("n_points")) cfg.n_points = unsigned_field(doc, "n_points");
    if (has("n_grid")) cfg.n_grid = unsigned_field(doc, "n_grid");
    if (has("output_dir")) cfg.output_dir = string_field(doc, "output_dir");

    // Invariants of the fields that were given, then required fields, then
    // the nested validators.
    try {
        cfg.cost.validate();
        cfg.noise.validate();
        if (!(cfg.plant.sigma_p >= 0.0)) throw ConfigError("sigma_p must be >= 0");
        if (cfg.plant.is_truncated() && !(cfg.plant.lower < cfg.plant.upper)) throw ConfigError("lower < upper");
        if (!has("p_hat")) throw ConfigError("missing required field 'p_hat'");
        cfg.plant.p_hat = number_field(doc, "p_hat");
        cfg.plant.validate();
        cfg.search.validate();
        if (cfg.cost.finite_horizon()) cfg.sim.validate(cfg.cost.horizon);
        if (cfg.n_points < 2) throw ConfigError("n_points must be >= 2");
        if (cfg.n_grid < 3) throw ConfigError("n_grid must be >= 3");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        rethrow_as_config(e);
    }
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["schema"] = kConfigSchema;
    j["p_hat"] = cfg.plant.p_hat;
    j["sigma_p"] = cfg.plant.sigma_p;
    j["kind"] = cfg.plant.is_truncated() ? "truncated" : "gaussian";
    if (cfg.plant.is_truncated()) {
        j["lower"] = cfg.plant.lower;
        j["upper"] = cfg.plant.upper;
    }
    j["q"] = cfg.cost.q;
    j["r"] = cfg.cost.r;
    if (cfg.cost.finite_horizon()) {
        j["T"] = cfg.cost.horizon;
    } else {
        j["T"] = "inf";
    }
    j["sigma"] = cfg.noise.sigma;
    if (cfg.search_bracket_explicit) {
        j["bracket_lo"] = cfg.search.bracket_lo;
        j["bracket_hi"] = cfg.search.bracket_hi;
    }
    j["tol_theta"] = cfg.search.tol_theta;
    j["max_iters"] = cfg.search.max_iters;
    j["dt"] = cfg.sim.dt;
    j["n_paths"] = cfg.sim.n_paths;
    j["seed"] = cfg.sim.seed;
    j["scheme"] = to_string(cfg.sim.scheme);
    if (cfg.theta) j["theta"] = *cfg.theta;
    j["sigma_grid"] = cfg.sigma_grid.to_string();
    j["sigma_p_grid"] = cfg.sigma_p_grid.to_string();
    if (cfg.window) {
        std::ostringstream os;
        os.precision(17);
        os << cfg.window->lo << ':' << cfg.window->hi;
        j["window"] = os.str();
    }
    j["n_points"] = cfg.n_points;
    j["n_grid"] = cfg.n_grid;
    j["output_dir"] = cfg.output_dir.generic_string();
    return j;
}

} // namespace bayesctl
