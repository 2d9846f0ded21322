#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"

#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace maxlab;
using namespace maxlab::lab;
namespace fs = std::filesystem;

namespace {

const char* kSweep = R"(scenario: shear-xi-sweep
grid: 256
T: 0.5
xi_list: [0.4, 0.2, 0.1, 0.05, 0.0]
output_count: 8
seed: 3
)";

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("maxlab-test-" + name);
    fs::remove_all(p);
    return p;
}

void check_config_error(const std::string& text, const std::string& field) {
    try {
        parse_config(text);
        FAIL("expected ConfigError for field " << field);
    } catch (const ConfigError& e) {
        CHECK_MESSAGE(std::string(e.what()).find("'" + field) != std::string::npos, e.what());
    }
}

}  // namespace

TEST_CASE("config parsing and defaults") {
    const auto c = parse_config(kSweep);
    CHECK(c.scenario == Scenario::shear_xi_sweep);
    CHECK(c.nx == 256);
    CHECK(c.xi_ref() == 0.0);
    CHECK(c.seed == 3);

    const auto m = parse_config("scenario: multid-xi-sweep\nxi_list: [0.1, 0.0]\n");
    CHECK(m.nx == 64);
    CHECK(m.ny == 64);
    CHECK(m.T == doctest::Approx(0.1));
    CHECK(m.initial_data == "deformation-map");

    // echo is canonical and re-parses to the same echo
    CHECK(echo_config(parse_config(echo_config(c))) == echo_config(c));
    CHECK(echo_config(parse_config(echo_config(m))) == echo_config(m));
}

TEST_CASE("config errors name the field") {
    check_config_error("scenario: shear-xi-sweep\nG: -1\nxi_list: [0.1, 0.0]\n", "G");
    check_config_error("scenario: shear-xi-sweep\nxi_list: [0.1, 0.2]\n", "xi_list");
    check_config_error("scenario: shear-xi-sweep\nxi_list: [0.1, -0.1]\n", "xi_list");
    check_config_error("scenario: shear-xi-sweep\ngrid: 100\nxi_list: [0.1, 0.0]\n", "grid");
    check_config_error("scenario: shear-xi-sweep\nxi_lst: [0.1, 0.0]\n", "xi_lst");
    check_config_error("scenario: warp-drive\n", "scenario");
    check_config_error("scenario: shear-xi-sweep\nT: fast\n", "T");
    check_config_error("scenario: shear-xi-sweep\ncfl: 1.5\nxi_list: [0.1, 0.0]\n", "cfl");
    check_config_error("scenario: multid-xi-sweep\ncfl: 0.5\nxi_list: [0.1, 0.0]\n", "cfl");
    check_config_error("scenario: shear-stokes\nxi_list: [0.5]\n", "bc_left");
    check_config_error(
        "scenario: shear-energy-audit\nbc_left: {kind: dissipative, c_u: 1, c_tau: 1}\n"
        "bc_right: {kind: dissipative, c_u: 1, c_tau: 1}\n",
        "bc_left");
    check_config_error("scenario: shear-xi-sweep\nbc_left: {kind: periodic, c_u: 1}\n", "bc_left");
    CHECK_THROWS_AS(parse_config("just a string"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario: [unclosed"), ConfigError);
}

TEST_CASE("rate fit") {
    std::vector<RatePair> p1, p2;
    for (double d : {0.4, 0.2, 0.1, 0.05}) {
        p1.push_back({d, 3.0 * d});
        p2.push_back({d, 3.0 * d * d});
    }
    const auto r1 = fit_rate(p1, 1);
    CHECK(std::abs(r1.slope - 1.0) <= 1e-12);
    CHECK(r1.constant == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r1.constant_unit_slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r1.slope_ci_low == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r1.slope_ci_high == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(fit_rate(p2, 1).slope - 2.0) <= 1e-12);

    std::vector<RatePair> noisy{{0.4, 0.13}, {0.2, 0.065}, {0.1, 0.036}, {0.05, 0.0171}, {0.025, 0.0089}};
    const auto a = fit_rate(noisy, 42), b = fit_rate(noisy, 42);
    CHECK(a.slope_ci_low == b.slope_ci_low);
    CHECK(a.slope_ci_high == b.slope_ci_high);
    CHECK(a.slope_ci_low <= a.slope);
    CHECK(a.slope <= a.slope_ci_high);

    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.2, 2.0}, {0.3, 3.0}}, 0), DataError);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.2, 0.0}, {0.3, 3.0}, {0.4, 4.0}}, 0), DataError);
    CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.1, 2.0}, {0.1, 3.0}, {0.1, 4.0}}, 0), DataError);
}

TEST_CASE("results.csv format") {
    ResultRow r;
    r.scenario = "multid-xi-sweep";
    r.xi_1 = 0.1;
    r.xi_2 = 0.0;
    r.t = 0.1;
    r.l2_diff = 1.0 / 3.0;
    const std::string text = format_results({r});
    CHECK(text.rfind(std::string(kResultsHeader) + "\n", 0) == 0);
    CHECK(text.find("multid-xi-sweep,0.10000000000000001,0,0.10000000000000001,0.33333333333333331,,,,,\n") !=
          std::string::npos);
    const auto back = parse_results(text);
    REQUIRE(back.size() == 1);
    CHECK(*back[0].l2_diff == 1.0 / 3.0);
    CHECK_FALSE(back[0].energy.has_value());
    CHECK(format_results(back) == text);
    CHECK_THROWS_AS(parse_results("a,b\n"), DataError);
    CHECK_THROWS_AS(parse_results(std::string(kResultsHeader) + "\nx,1,2\n"), DataError);
}

TEST_CASE("sweep run, fit from csv, determinism across threads") {
    auto cfg = parse_config(kSweep);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto one = run_scenario(cfg);
    omp_set_num_threads(4);
    const auto four = run_scenario(cfg);
    omp_set_num_threads(saved);
    CHECK(format_results(one.rows) == format_results(four.rows));
    REQUIRE(one.report["fit"].is_object());
    const double slope = one.report["fit"]["slope"].get<double>();
    CHECK(slope == doctest::Approx(1.0).epsilon(0.15));

    const auto groups = fit_results(parse_results(format_results(one.rows)), cfg.seed);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].fit.slope == doctest::Approx(slope).epsilon(1e-12));
    CHECK(groups[0].fit.pairs.size() == 4);  // xi_1 = xi_2 row excluded
}

TEST_CASE("output files") {
    auto cfg = parse_config(kSweep);
    cfg.output_dir = scratch("outputs").string();
    const auto res = run_scenario(cfg);
    write_outputs(cfg, kSweep, res);
    const fs::path dir(cfg.output_dir);
    const std::string csv = read(dir / "results.csv");
    const auto report = nlohmann::json::parse(read(dir / "report.json"));
    const auto manifest = nlohmann::json::parse(read(dir / "manifest.json"));
    CHECK(report["schema_version"] == kReportSchemaVersion);
    CHECK(manifest["checksums"]["results.csv"] == sha256_hex(csv));
    CHECK(manifest["config_source"] == kSweep);
    CHECK(manifest["code_version"] == code_version());
    // The manifest alone reproduces the rows.
    const auto again = run_scenario(parse_config(manifest["config"].get<std::string>()));
    CHECK(format_results(again.rows) == csv);
    fs::remove_all(dir);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("stokes and audits") {
    const auto stokes = run_scenario(parse_config(R"(scenario: shear-stokes
grid: 1024
domain: [0.0, 2.0]
T: 1.0
xi_list: [0.0]
initial_data: rest
bc_left: {kind: dirichlet-velocity, g: 1.0}
bc_right: {kind: dissipative, c_u: 1.0, c_tau: 1.0, g: 0.0}
output_count: 4
)"));
    for (const auto& f : stokes.report["points"][0]["fronts"]) {
        CHECK(f["front_error_cells"].get<double>() <= 2.0);
        CHECK(std::abs(f["amplitude"].get<double>() - 1.0) <= 0.01);
    }

    const auto truncated = run_scenario(parse_config(R"(scenario: shear-stokes
grid: 256
T: 1.0
xi_list: [0.5]
initial_data: rest
bc_left: {kind: dirichlet-velocity, g: 1.0}
bc_right: {kind: dissipative, c_u: 1.0, c_tau: 1.0, g: 0.0}
output_count: 4
)"));
    CHECK(truncated.report["points"][0].contains("warning"));

    const auto audits = run_scenario(parse_config(R"(scenario: multid-audits
grid: [16, 16]
T: 0.05
xi_list: [0.5]
refinement: [16, 32]
output_count: 2
)"));
    CHECK(audits.ok);
    CHECK(audits.report["conservation_drift_per_step"].get<double>() <= 1e-12);
    CHECK(audits.report["equilibrium_fixed_point_change"].get<double>() <= 1e-14);
    CHECK(audits.report["refinement"].size() == 2);
}

TEST_CASE("invariant suite") {
    for (const auto& c : run_invariant_suite(0)) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
}
