/// @file acceptance.cpp
/// @brief Acceptance criteria 1-10: one PASS/FAIL line each.
///
/// Usage: maxlab_acceptance <config-dir> [--expect-fail N]...
/// The exit status is zero when every criterion passes except those listed
/// with --expect-fail, which must fail. FAIL lines are printed either way.
#include "maxlab/entropy.hpp"
#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"
#include "maxlab/multid.hpp"

#include <Eigen/Eigenvalues>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace maxlab;
using namespace maxlab::lab;
using nlohmann::json;
namespace en = maxlab::entropy;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

fs::path g_config_dir;

ScenarioConfig config(const std::string& name) {
    std::ifstream in(g_config_dir / name);
    if (!in) throw ConfigError("missing config " + (g_config_dir / name).string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Runs are shared between criteria; each is computed once.
struct Timed {
    ScenarioResult result;
    double seconds = 0.0;
};

std::map<std::string, Timed> g_cache;

const Timed& run(const std::string& name) {
    auto it = g_cache.find(name);
    if (it != g_cache.end()) return it->second;
    const auto cfg = config(name);
    const auto t0 = std::chrono::steady_clock::now();
    Timed t;
    t.result = run_scenario(cfg);
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return g_cache.emplace(name, std::move(t)).first->second;
}

double fit_slope(const json& report) { return report.at("fit").at("slope").get<double>(); }

Outcome criterion_1() {
    const auto& r = run("shear-xi-sweep.yaml");
    const double slope = fit_slope(r.result.report);
    const bool ok = slope >= 0.85 && slope <= 1.15 && r.seconds <= 10.0;
    return {ok, fmt("slope=%.4f", slope) + fmt(" runtime=%.2fs", r.seconds)};
}

Outcome criterion_2() {
    double worst = 0.0;
    for (const auto& p : run("shear-energy-audit-periodic.yaml").result.report["points"])
        worst = std::max(worst, p["energy_residual_max"].get<double>());
    int increases = 0;
    for (const auto& p : run("shear-energy-audit.yaml").result.report["points"]) {
        worst = std::max(worst, p["energy_residual_max"].get<double>());
        increases += p["energy_increases"].get<int>();
    }
    return {worst <= 1e-10 && increases == 0,
            fmt("max_relative_residual=%.3e", worst) + " energy_increases_dissipative=" + std::to_string(increases)};
}

Outcome criterion_3() {
    double worst = -1e300;
    for (const auto& p : run("shear-xi-sweep.yaml").result.report["points"])
        if (p.contains("difference_inequality_max_slack_relative"))
            worst = std::max(worst, p["difference_inequality_max_slack_relative"].get<double>());
    return {worst <= 1e-8, fmt("max_slack_over_initial_energy=%.3e", worst)};
}

Outcome criterion_4() {
    const auto& r = run("shear-stokes.yaml").result.report;
    for (const auto& p : r["points"]) {
        if (p["xi"].get<double>() != 0.5) continue;
        const auto& last = p["fronts"].back();
        const double cells = last["front_error_cells"].get<double>();
        const double amp = last["amplitude_relative_error"].get<double>();
        const bool ok = last["t"].get<double>() == 1.0 && cells <= 2.0 && amp <= 0.02;
        return {ok, fmt("t=%.3f", last["t"].get<double>()) + fmt(" front_error_cells=%.2f", cells) +
                        fmt(" amplitude_relative_error=%.2e", amp)};
    }
    return {false, "no xi = 0.5 point"};
}

Outcome criterion_5() {
    const auto& r = run("multid-xi-sweep.yaml");
    const double slope = fit_slope(r.result.report);
    const bool positive = r.result.report["rel_entropy_positive"].get<bool>();
    const bool ok = slope >= 0.7 && slope <= 1.3 && positive && r.seconds <= 300.0;
    return {ok, fmt("slope=%.4f", slope) + " rel_entropy_positive=" + (positive ? "true" : "false") +
                    fmt(" runtime=%.2fs", r.seconds)};
}

Outcome criterion_6() {
    const Eos eos{EosKind::isothermal, 1.0};
    const double G = 1.0;
    std::mt19937_64 rng(config("multid-xi-sweep.yaml").seed);
    std::normal_distribution<double> nd;
    double fd_worst = 0.0;
    double min_ratio = 1e300;
    int max_null = 0;
    double z_worst = 0.0;
    double z_small_worst = 0.0;  // over eps in {1e-2, 1e-3} only
    int z_over = 0;
    for (int k = 0; k < 100; ++k) {
        const auto V = en::to_chart(en::sample_state(rng, en::StateBox{}));
        const auto e = en::evaluate(V, 2, eos, G);
        en::ChartVector fd(V.size());
        for (Eigen::Index m = 0; m < V.size(); ++m) {
            const double h = 1e-5 * std::max(1.0, std::abs(V[m]));
            auto vp = V, vm = V;
            vp[m] += h;
            vm[m] -= h;
            fd[m] = (en::eta_chart(vp, 2, eos, G) - en::eta_chart(vm, 2, eos, G)) / (2 * h);
        }
        fd_worst = std::max(fd_worst, (fd - e.grad).norm() / e.grad.norm());

        Eigen::SelfAdjointEigenSolver<en::ChartMatrix> es(e.hess);
        const auto& ev = es.eigenvalues();
        min_ratio = std::min(min_ratio, ev[0] / ev[ev.size() - 1]);
        int null = 0;
        for (Eigen::Index r = 0; r < ev.size(); ++r) null += ev[r] <= 1e-10 * ev[ev.size() - 1];
        max_null = std::max(max_null, null);

        en::ChartVector W(V.size());
        for (Eigen::Index m = 0; m < V.size(); ++m) W[m] = nd(rng);
        W /= W.norm();
        double q[3];
        int i = 0;
        for (double eps : {1e-1, 1e-2, 1e-3}) q[i++] = en::taylor_remainder_Z(V + eps * W, V, 2, eos, G).norm() / (eps * eps);
        const double hi = std::max({q[0], q[1], q[2]});
        const double variation = (hi - std::min({q[0], q[1], q[2]})) / hi;
        z_worst = std::max(z_worst, variation);
        z_over += variation > 0.25;
        z_small_worst = std::max(z_small_worst, std::abs(q[1] - q[2]) / std::max(q[1], q[2]));
    }
    const bool fd_ok = fd_worst <= 1e-6;
    const bool pd_ok = min_ratio > 0.0;
    const bool z_ok = z_worst <= 0.25;
    return {fd_ok && pd_ok && z_ok,
            fmt("grad_fd_rel_error=%.2e", fd_worst) + (fd_ok ? "(ok)" : "(fail)") +
                fmt(" hess_min_over_max_eig=%.2e", min_ratio) + " null_dim=" + std::to_string(max_null) +
                (pd_ok ? "(ok)" : "(fail: semidefinite only)") + fmt(" Z_ratio_variation=%.3f", z_worst) +
                (z_ok ? "(ok)" : "(fail: " + std::to_string(z_over) + "/100 states)") +
                fmt(" Z_ratio_variation_eps_1e-2_1e-3=%.3f", z_small_worst)};
}

Outcome criterion_7() {
    const auto& r = run("multid-audits.yaml").result.report;
    const double drift = r["conservation_drift_per_step"].get<double>();
    const double eq = r["equilibrium_fixed_point_change"].get<double>();
    return {drift <= 1e-12 && eq <= 1e-14,
            fmt("max_step_drift=%.2e", drift) + fmt(" equilibrium_change=%.2e", eq)};
}

Outcome criterion_8() {
    const auto& levels = run("multid-audits.yaml").result.report["refinement"];
    bool ok = levels.size() >= 3;
    std::string detail = "residuals=";
    for (const auto& l : levels) detail += fmt("%.4g ", l["constitutive_residual"].get<double>());
    detail += "ratios=";
    for (const auto& l : levels)
        if (l.contains("constitutive_ratio")) {
            const double q = l["constitutive_ratio"].get<double>();
            ok = ok && q >= 1.6 && q <= 2.4;
            detail += fmt("%.3f ", q);
        }
    return {ok, detail};
}

Outcome criterion_9() {
    const auto& rows = run("multid-xi-sweep.yaml").result.rows;
    const auto cfg = config("multid-xi-sweep.yaml");
    std::map<double, std::pair<double, double>> by_xi;  // initial, final
    for (const auto& row : rows) {
        auto& e = by_xi[*row.xi_1];
        if (*row.t == 0.0) e.first = *row.piola_residual;
        if (std::abs(*row.t - cfg.T) <= 1e-12) e.second = *row.piola_residual;
    }
    double worst = 0.0;
    for (const auto& [xi, e] : by_xi) worst = std::max(worst, e.second / e.first);
    return {!by_xi.empty() && worst <= 10.0, fmt("max_final_over_initial=%.3f", worst)};
}

Outcome criterion_10() {
    const char* names[] = {"shear-xi-sweep.yaml", "shear-energy-audit-periodic.yaml", "shear-energy-audit.yaml",
                           "shear-stokes.yaml", "multid-xi-sweep.yaml", "multid-audits.yaml"};
    const int saved = omp_get_max_threads();
    bool ok = true;
    std::string detail;
    for (const char* name : names) {
        const std::string first = format_results(run(name).result.rows);
        bool same = true;
        for (int t : {1, 3}) {
            omp_set_num_threads(t);
            same = same && format_results(run_scenario(config(name)).rows) == first;
        }
        omp_set_num_threads(saved);
        ok = ok && same;
        if (!same) detail += std::string(name) + " differs; ";
    }
    return {ok, ok ? "results.csv identical for 6 configs at default (" + std::to_string(saved) + "), 1 and 3 threads" : detail};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <config-dir> [--expect-fail N]...\n", argv[0]);
        return 2;
    }
    g_config_dir = argv[1];
    std::set<int> expected_fail;
    for (int a = 2; a + 1 < argc; a += 2)
        if (std::string(argv[a]) == "--expect-fail") expected_fail.insert(std::stoi(argv[a + 1]));

    const std::function<Outcome()> criteria[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                 criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
    bool as_expected = true;
    for (int k = 0; k < 10; ++k) {
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const bool expect_fail = expected_fail.count(k + 1) > 0;
        std::printf("criterion %2d: %s  %s%s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    expect_fail ? "  [known unattainable]" : "");
        std::fflush(stdout);
        if (o.pass == expect_fail) as_expected = false;
    }
    return as_expected ? 0 : 1;
}
