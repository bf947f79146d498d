#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bayesctl/config.hpp"
#include "bayesctl/errors.hpp"
#include "bayesctl/report.hpp"
#include "oracles.hpp"

using namespace bayesctl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "bayesctl_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string config_error(std::string_view text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

RunConfig with_out(std::string_view text, const std::string& name) {
    RunConfig cfg = parse_config_text(text);
    cfg.output_dir = scratch(name);
    return cfg;
}

// Trapezoid over the rows of a two-column CSV with header.
double csv_trapezoid(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    double prev_x = NAN, prev_y = NAN, total = 0.0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double x = std::stod(line.substr(0, comma));
        const double y = std::stod(line.substr(comma + 1));
        if (!std::isnan(prev_x)) total += 0.5 * (x - prev_x) * (y + prev_y);
        prev_x = x;
        prev_y = y;
    }
    return total;
}

const char* kWideConfig = R"({"schema": 1, "p_hat": 5, "sigma_p": 5, "q": 100, "r": 1})";
const char* kTakeaways = R"({"p_hat": 3, "sigma_p": 0.6, "q": 1, "r": 1, "T": 3, "sigma": 0.1})";

} // namespace

TEST_CASE("config parsing and validation") {
    const RunConfig fig1 = parse_config_text(kWideConfig);
    CHECK(fig1.plant.p_hat == 5.0);
    CHECK(fig1.plant.sigma_p == 5.0);
    CHECK(fig1.cost.q == 100.0);
    CHECK(fig1.cost.r == 1.0);
    CHECK_FALSE(fig1.cost.finite_horizon());
    CHECK(fig1.sim.n_paths == 100000);
    CHECK(fig1.sigma_grid.values().size() == 11);

    CHECK(config_error(R"({"p_hat": 3, "r": 0})").find("r must be positive") != std::string::npos);
    CHECK(config_error(R"({"p_hat": 3, "sigma_p": 2, "kind": "truncated", "lower": 6, "upper": 0})")
              .find("lower < upper") != std::string::npos);
    CHECK(config_error(R"({"p_hat": 3, "sigmap": 2})").find("unknown field 'sigmap'") != std::string::npos);
    CHECK(config_error(R"({"sigma_p": 2})").find("p_hat") != std::string::npos);
    CHECK(config_error(R"({"p_hat": 3, "schema": 2})").find("schema") != std::string::npos);
    CHECK(config_error("{\n  \"p_hat\": 3,\n  \"q\": ,\n}").find("line 3") != std::string::npos);
    CHECK(config_error(R"({"p_hat": 3, "bracket_lo": -5})").find("together") != std::string::npos);
    CHECK(config_error(R"({"p_hat": 3, "T": "forever"})").find("'T'") != std::string::npos);

    const GridSpec g = parse_grid("0:1.5:11");
    CHECK(g.values().front() == 0.0);
    CHECK(g.values().back() == 1.5);
    CHECK(g.values()[1] == doctest::Approx(0.15));
    CHECK_THROWS_AS(parse_grid("1:0:5"), ConfigError);
    CHECK_THROWS_AS(parse_grid("0:1"), ConfigError);
    const Window w = parse_window("-20:-5");
    CHECK(w.lo == -20.0);
    CHECK(w.hi == -5.0);
    CHECK_THROWS_AS(parse_window("3:1"), ConfigError);
}

TEST_CASE("resolved config round-trips through JSON") {
    const RunConfig cfg = parse_config_text(kTakeaways);
    const nlohmann::json j = to_json(cfg);
    CHECK(j.at("schema") == 1);
    const RunConfig again = parse_config_json(j);
    CHECK(to_json(again) == j);
}

TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-16.180339887498949) == "-16.18033988749895");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("solve") {
    const CommandResult det = cmd_solve(with_out(kWideConfig, "solve1"), SolveMode::Deterministic);
    const auto& r = det.report.at("result");
    CHECK(std::abs(r.at("gain").get<double>() - (-16.180)) < 1e-3);
    CHECK(std::abs(r.at("expected_cost").get<double>() - 8.090) < 1e-3);
    CHECK(det.report.at("schema_version") == kReportSchema);
    CHECK(det.report.at("config").at("q") == 100.0);
    CHECK(fs::exists(det.files.at(0)));

    const CommandResult key = cmd_solve(with_out(kTakeaways, "solve2"), SolveMode::Deterministic);
    CHECK(std::abs(key.report.at("result").at("gain").get<double>() - (-6.162)) < 1e-3);
    CHECK(std::abs(key.report.at("result").at("expected_cost").get<double>() - 3.081) < 1e-3);

    const char* collapse = R"({"p_hat": 3, "sigma_p": 0, "q": 1, "r": 1, "T": 10, "sigma": 0})";
    const RunConfig ccfg = with_out(collapse, "solve3");
    const double bayes = cmd_solve(ccfg, SolveMode::Bayes).report.at("result").at("gain").get<double>();
    const double determ = cmd_solve(ccfg, SolveMode::Deterministic).report.at("result").at("gain").get<double>();
    CHECK(std::abs(bayes - determ) < 1e-3);
}

TEST_CASE("density") {
    const RunConfig cfg = with_out(kWideConfig, "density");
    const CommandResult gain = cmd_density(cfg, DensityCommand::Gain);
    CHECK(std::abs(gain.report.at("result").at("expected_gain").get<double>() - (-17.046)) < 5e-3);
    const std::string gcsv = slurp(cfg.output_dir / "density_gain.csv");
    CHECK(gcsv.rfind("abscissa,density\n", 0) == 0);
    CHECK(std::abs(csv_trapezoid(gcsv) - 1.0) < 1e-3);
    CHECK(fs::exists(cfg.output_dir / "density_gain.json"));

    const CommandResult cost = cmd_density(cfg, DensityCommand::Cost);
    CHECK(std::abs(cost.report.at("result").at("expected_cost").get<double>() - 8.523) < 5e-3);
    CHECK(std::abs(csv_trapezoid(slurp(cfg.output_dir / "density_cost.csv")) - 1.0) < 1e-3);

    CHECK_THROWS_AS(cmd_density(cfg, DensityCommand::Induced), ConfigError);

    RunConfig fig4 = with_out(
        R"({"p_hat": 3, "sigma_p": 2, "kind": "truncated", "lower": 0, "upper": 6, "q": 1, "r": 1, "T": 3,
            "sigma": 0.1})",
        "density4");
    const CommandResult induced = cmd_density(fig4, DensityCommand::Induced);
    CHECK(induced.report.at("result").at("laplace_std").get<double>() > 0.0);
    CHECK(std::abs(csv_trapezoid(slurp(fig4.output_dir / "density_induced.csv")) - 1.0) < 1e-3);
    CHECK_THROWS_AS(cmd_density(fig4, DensityCommand::Gain), ConfigError);
}

TEST_CASE("sweep output is ordered and reproducible") {
    const char* text = R"({"p_hat": 3, "q": 1, "r": 1, "T": 3, "sigma_grid": "0:0.3:3", "sigma_p_grid": "0:0.6:3"})";
    const RunConfig cfg = with_out(text, "sweep");
    cmd_sweep(cfg);
    const std::string first = slurp(cfg.output_dir / "sweep.csv");
    cmd_sweep(cfg);
    CHECK(slurp(cfg.output_dir / "sweep.csv") == first);

    std::istringstream in(first);
    std::string line;
    std::getline(in, line);
    CHECK(line == "sigma,sigma_p,theta_star,expected_cost,stability_prob,status");
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    REQUIRE(rows.size() == 9);
    CHECK(rows[0][0] == "0");
    CHECK(rows[1][0] == "0.15");
    CHECK(rows[0][1] == "0");
    CHECK(rows[3][1] == "0.3");
    CHECK(std::abs(std::stod(rows[0][2]) - (-6.1623)) < 2e-2);
    for (const auto& r : rows) CHECK(r[5] == "ok");
    // |theta*| nondecreasing in sigma_p per sigma column.
    for (int c = 0; c < 3; ++c)
        for (int r = 1; r < 3; ++r)
            CHECK(std::abs(std::stod(rows[3 * r + c][2])) >= std::abs(std::stod(rows[3 * (r - 1) + c][2])) - 1e-7);
}

TEST_CASE("validate: pass, deterministic limit, and a planted formula error") {
    RunConfig cfg = with_out(R"({"p_hat": 3, "sigma_p": 0.6, "q": 1, "r": 1, "T": 3, "sigma": 0.1,
                                 "theta": -6.1623, "n_paths": 100000, "dt": 0.01})",
                             "validate");
    const CommandResult ok = cmd_validate(cfg);
    CHECK(ok.exit_code == kExitOk);
    CHECK(ok.report.at("result").at("pass") == true);

    const CommandResult bad = cmd_validate(cfg, 1.1);
    CHECK(bad.exit_code == kExitValidationFailed);
    CHECK(std::abs(bad.report.at("result").at("z").get<double>()) > 3.0);

    RunConfig quiet = with_out(R"({"p_hat": 3, "q": 1, "r": 1, "T": 3, "sigma": 0, "n_paths": 4, "dt": 1e-4})",
                               "validate0");
    const CommandResult det = cmd_validate(quiet);
    CHECK(det.exit_code == kExitOk);
    CHECK(det.report.at("result").at("relative_error").get<double>() < 1e-3);
}

TEST_CASE("compare") {
    const CommandResult res = cmd_compare(with_out(kTakeaways, "compare"));
    const auto& r = res.report.at("result");
    CHECK(std::abs(r.at("theta_d").get<double>() - (-6.162)) < 1e-3);
    const double theta_d = r.at("theta_d").get<double>();
    const double ref = oracle::adaptive_simpson(
        [&](double p) { return oracle::lemma_cost(p, theta_d, 1, 1, 3, 0.1) * oracle::normal_pdf(p, 3.0, 0.6); },
        3.0 - 12 * 0.6, 3.0 + 12 * 0.6, 1e-12, 256);
    CHECK(r.at("cost_at_theta_d").get<double>() == doctest::Approx(ref).epsilon(1e-8));
    CHECK(r.at("cost_at_theta_s").get<double>() <= r.at("cost_at_theta_d").get<double>());
    CHECK(r.at("overconfidence_ratio").get<double>() ==
          doctest::Approx(r.at("cost_at_theta_d").get<double>() / r.at("J_d_star").get<double>()));

    const CommandResult wide =
        cmd_compare(with_out(R"({"p_hat": 3, "sigma_p": 2, "q": 1, "r": 1, "T": 3, "sigma": 0.1})", "compare2"));
    CHECK(wide.report.at("result").at("stability_prob_s").get<double>() >=
          wide.report.at("result").at("stability_prob_d").get<double>());
}

TEST_CASE("laplace and byte-identical reruns") {
    const char* text = R"({"p_hat": 3, "sigma_p": 2, "kind": "truncated", "lower": 0, "upper": 6, "q": 1, "r": 1,
                           "T": 3, "sigma": 0.1})";
    const RunConfig cfg = with_out(text, "laplace");
    const CommandResult a = cmd_laplace(cfg);
    const std::string csv = slurp(cfg.output_dir / "laplace.csv");
    const std::string js = slurp(cfg.output_dir / "laplace.json");
    CHECK(csv.rfind("abscissa,density,laplace_density\n", 0) == 0);
    CHECK(std::abs(a.report.at("result").at("laplace_peak_ratio").get<double>() - 1.0) < 0.25);
    CHECK(std::abs(a.report.at("result").at("trapezoid").get<double>() - 1.0) < 1e-3);
    cmd_laplace(cfg);
    CHECK(slurp(cfg.output_dir / "laplace.csv") == csv);
    CHECK(slurp(cfg.output_dir / "laplace.json") == js);
    CHECK_THROWS_AS(cmd_laplace(with_out(kTakeaways, "laplace2")), ConfigError);
}
