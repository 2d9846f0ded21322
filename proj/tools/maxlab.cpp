/// @file maxlab.cpp
/// @brief Command line: run a scenario, fit a results file, or run the invariant suite.
#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw maxlab::ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maxlab: Maxwell viscoelastic fluid numerical lab"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> output_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("--output-dir", output_dir, "Override output_dir");
    app.add_option("--threads", threads, "Override threads (OpenMP workers)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Override seed");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run the scenario described by a YAML config");
    run->add_option("config", config_path, "Config file")->required();

    std::string results_path;
    auto* fit = app.add_subcommand("fit", "Fit xi-rates from a results.csv");
    fit->add_option("results", results_path, "results.csv")->required();

    app.add_subcommand("check", "Run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (threads) omp_set_num_threads(*threads);

    if (run->parsed()) {
        maxlab::lab::ScenarioConfig cfg;
        std::string text;
        try {
            text = read_file(config_path);
            cfg = maxlab::lab::parse_config(text);
            if (output_dir) cfg.output_dir = *output_dir;
            if (threads) cfg.threads = *threads;
            if (seed) cfg.seed = *seed;
            cfg.validate();
        } catch (const maxlab::ConfigError& e) {
            std::cerr << "maxlab: " << e.what() << '\n';
            return kExitUsage;
        }
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        try {
            const auto result = maxlab::lab::run_scenario(cfg);
            maxlab::lab::write_outputs(cfg, text, result);
            std::cout << "wrote " << result.rows.size() << " rows to " << cfg.output_dir << '\n';
            if (!result.ok) {
                std::cerr << "maxlab: solver aborted; see report.json\n";
                return kExitFailure;
            }
        } catch (const std::exception& e) {
            std::cerr << "maxlab: " << e.what() << '\n';
            return kExitFailure;
        }
        return kExitOk;
    }

    if (fit->parsed()) {
        try {
            const auto rows = maxlab::lab::parse_results(read_file(results_path));
            nlohmann::json out = nlohmann::json::array();
            for (const auto& g : maxlab::lab::fit_results(rows, seed.value_or(0)))
                out.push_back({{"scenario", g.scenario}, {"xi_2", g.xi_2}, {"fit", maxlab::lab::to_json(g.fit)}});
            std::cout << out.dump(2) << '\n';
        } catch (const maxlab::ConfigError& e) {
            std::cerr << "maxlab: " << e.what() << '\n';
            return kExitUsage;
        } catch (const std::exception& e) {
            std::cerr << "maxlab: " << e.what() << '\n';
            return kExitFailure;
        }
        return kExitOk;
    }

    const auto checks = maxlab::lab::run_invariant_suite(seed.value_or(0));
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s  %s  (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        all = all && c.pass;
    }
    return all ? kExitOk : kExitFailure;
}
