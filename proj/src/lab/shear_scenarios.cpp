#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxlab::lab {

namespace {

using namespace maxlab::shear1d;
using nlohmann::json;

constexpr double kTwoPi = 6.28318530717958647692;

ShearState1D initial_state(const ScenarioConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.nx);
    if (cfg.initial_data == "rest") return ShearState1D::zeros(cfg.y_min, cfg.y_max, n);
    const double len = cfg.y_max - cfg.y_min;
    const double k = kTwoPi * cfg.wavenumber / len;
    const double amp = cfg.amplitude;
    const double y0 = cfg.y_min;
    return ShearState1D::sampled(
        cfg.y_min, cfg.y_max, n, [=](double y) { return amp * std::sin(k * (y - y0)); }, [](double) { return 0.0; });
}

/// t = 0 plus output_count equally spaced times up to T.
std::vector<double> output_times(const ScenarioConfig& cfg) {
    std::vector<double> t{0.0};
    for (int j = 1; j <= cfg.output_count; ++j) t.push_back(cfg.T * j / cfg.output_count);
    return t;
}

RunOptions run_options(const ScenarioConfig& cfg, bool keep_steps) {
    RunOptions o;
    o.T = cfg.T;
    o.cfl = cfg.cfl;
    o.output_times = output_times(cfg);
    o.keep_steps = keep_steps;
    return o;
}

ShearRun run_point(const ScenarioConfig& cfg, double xi, bool keep_steps) {
    return run_shear(initial_state(cfg), cfg.params(xi), cfg.bc_left.spec(Side::left), cfg.bc_right.spec(Side::right),
                     run_options(cfg, keep_steps));
}

/// Cumulative dissipation at the end of every ledger entry.
std::vector<double> cumulative_dissipation(const ShearRun& run) {
    std::vector<double> out;
    double acc = 0.0;
    for (const auto& l : run.ledger) {
        acc += l.dissipation;
        out.push_back(acc);
    }
    return out;
}

double dissipation_at(const ShearRun& run, const std::vector<double>& cumulative, double t) {
    double value = 0.0;
    for (std::size_t k = 0; k < run.ledger.size() && run.ledger[k].t <= t; ++k) value = cumulative[k];
    return value;
}

/// Relative energy int (dtau^2 + G du^2), the quadratic 1D relative entropy.
double relative_energy(const ShearState1D& a, const ShearState1D& b, double G) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double du = a.u[i] - b.u[i];
        const double dt = a.tau[i] - b.tau[i];
        s += dt * dt + G * du * du;
    }
    return s * a.dy();
}

struct Ledger {
    double max_residual = 0.0;
    int increases = 0;
};

Ledger audit_ledger(const ShearRun& run) {
    Ledger l;
    for (const auto& e : run.ledger) {
        l.max_residual = std::max(l.max_residual, std::abs(e.relative_residual()));
        if (e.energy > e.energy_prev) ++l.increases;
    }
    return l;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical-error";
    if (dynamic_cast<const StabilityError*>(&e)) return "stability-error";
    if (dynamic_cast<const SingularBoundaryError*>(&e)) return "singular-boundary";
    return "error";
}

}  // namespace

ScenarioResult run_shear_xi_sweep(const ScenarioConfig& cfg) {
    const std::string name(to_string(cfg.scenario));
    const double xi2 = cfg.xi_ref();
    const auto n_points = cfg.xi_list.size();

    // Entry n_points - 1 is the reference run.
    std::vector<ShearRun> runs(n_points);
    std::vector<std::string> status(n_points, "ok");
    std::vector<std::string> message(n_points);

#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < static_cast<long>(n_points); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            runs[idx] = run_point(cfg, cfg.xi_list[idx], true);
        } catch (const std::exception& e) {
            status[idx] = error_kind(e);
            message[idx] = e.what();
        }
    }

    ScenarioResult result;
    json points = json::array();
    const ShearRun& ref = runs.back();
    const bool ref_ok = status.back() == "ok";
    if (!ref_ok) result.ok = false;

    const double e0 = energy(initial_state(cfg), cfg.G);
    std::vector<RatePair> pairs;
    for (std::size_t k = 0; k < n_points; ++k) {
        json p = {{"xi_1", cfg.xi_list[k]}, {"xi_2", xi2}, {"status", status[k]}};
        if (!message[k].empty()) p["message"] = message[k];
        if (status[k] != "ok" || !ref_ok) {
            points.push_back(p);
            continue;
        }
        const ShearRun& run = runs[k];
        const auto cumulative = cumulative_dissipation(run);
        double sup = 0.0;
        for (std::size_t s = 0; s < run.snapshots.size(); ++s) {
            const ShearState1D& a = run.snapshots[s];
            const ShearState1D& b = ref.snapshots[s];
            const double l2 = l2_difference(a, b);
            sup = std::max(sup, l2);
            ResultRow row;
            row.scenario = name;
            row.xi_1 = cfg.xi_list[k];
            row.xi_2 = xi2;
            row.t = a.t;
            row.l2_diff = l2;
            row.rel_entropy = relative_energy(a, b, cfg.G);
            row.energy = energy(a, cfg.G);
            row.dissipation = dissipation_at(run, cumulative, a.t);
            result.rows.push_back(row);
        }
        const Ledger led = audit_ledger(run);
        p["sup_l2_diff"] = sup;
        p["energy_residual_max"] = led.max_residual;
        if (k + 1 < n_points) {
            const Prop1Report audit = prop1_audit(run, ref);
            p["difference_inequality_max_slack"] = audit.max_slack;
            p["difference_inequality_max_slack_relative"] = audit.max_slack / e0;
            p["sup_l2_diff_all_steps"] = audit.sup_l2_diff;
            if (sup > 1e-12) pairs.push_back({std::abs(cfg.xi_list[k] - xi2), sup});
        }
        points.push_back(p);
    }

    result.report["points"] = points;
    result.report["initial_energy"] = e0;
    result.report["error_norm"] = "sup over output times of the L2 norm of (u, tau)";
    try {
        result.report["fit"] = to_json(fit_rate(pairs, cfg.seed));
    } catch (const DataError& e) {
        result.report["fit"] = nullptr;
        result.report["fit_error"] = e.what();
    }
    return result;
}

ScenarioResult run_shear_energy_audit(const ScenarioConfig& cfg) {
    const std::string name(to_string(cfg.scenario));
    const bool homogeneous = cfg.bc_left.g == 0.0 && cfg.bc_right.g == 0.0;
    ScenarioResult result;
    json points = json::array();
    for (double xi : cfg.xi_list) {
        json p = {{"xi", xi}};
        try {
            const ShearRun run = run_point(cfg, xi, false);
            const auto cumulative = cumulative_dissipation(run);
            for (const auto& s : run.snapshots) {
                ResultRow row;
                row.scenario = name;
                row.xi_1 = xi;
                row.t = s.t;
                row.energy = energy(s, cfg.G);
                row.dissipation = dissipation_at(run, cumulative, s.t);
                result.rows.push_back(row);
            }
            const Ledger led = audit_ledger(run);
            p["status"] = "ok";
            p["steps"] = run.ledger.size();
            p["energy_residual_max"] = led.max_residual;
            p["energy_increases"] = led.increases;
            p["homogeneous_data"] = homogeneous;
            p["energy_final"] = run.ledger.empty() ? 0.0 : run.ledger.back().energy;
        } catch (const std::exception& e) {
            p["status"] = error_kind(e);
            p["message"] = e.what();
            result.ok = false;
        }
        points.push_back(p);
    }
    result.report["points"] = points;
    return result;
}

ScenarioResult run_shear_stokes(const ScenarioConfig& cfg) {
    const std::string name(to_string(cfg.scenario));
    ScenarioResult result;
    json points = json::array();
    const double c = std::sqrt(cfg.G);
    const double wall = cfg.bc_left.g;
    for (double xi : cfg.xi_list) {
        json p = {{"xi", xi}};
        try {
            const ShearRun run = run_point(cfg, xi, false);
            const auto cumulative = cumulative_dissipation(run);
            json fronts = json::array();
            bool truncated = false;
            for (const auto& s : run.snapshots) {
                ResultRow row;
                row.scenario = name;
                row.xi_1 = xi;
                row.t = s.t;
                row.energy = energy(s, cfg.G);
                row.dissipation = dissipation_at(run, cumulative, s.t);
                result.rows.push_back(row);
                if (s.t <= 0.0) continue;

                const double expected = s.y_min + c * s.t;
                if (expected >= s.y_max - s.dy()) {
                    truncated = true;
                    continue;
                }
                std::size_t best = 0;
                double jump = 0.0;
                for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                    const double d = std::abs(s.u[i + 1] - s.u[i]);
                    if (d > jump) {
                        jump = d;
                        best = i;
                    }
                }
                const double front = s.y_min + static_cast<double>(best + 1) * s.dy();
                const double amp_expected = std::abs(wall) * std::exp(-0.5 * xi * s.t);
                fronts.push_back({{"t", s.t},
                                  {"front", front},
                                  {"front_expected", expected},
                                  {"front_error_cells", std::abs(front - expected) / s.dy()},
                                  {"amplitude", jump},
                                  {"amplitude_expected", amp_expected},
                                  {"amplitude_relative_error",
                                   amp_expected > 0.0 ? std::abs(jump - amp_expected) / amp_expected : 0.0}});
            }
            p["status"] = "ok";
            p["fronts"] = fronts;
            if (truncated) p["warning"] = "front left the domain before the final output time; report truncated";
        } catch (const std::exception& e) {
            p["status"] = error_kind(e);
            p["message"] = e.what();
            result.ok = false;
        }
        points.push_back(p);
    }
    result.report["points"] = points;
    result.report["wall_velocity"] = wall;
    return result;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    switch (cfg.scenario) {
        case Scenario::shear_xi_sweep: return run_shear_xi_sweep(cfg);
        case Scenario::shear_stokes: return run_shear_stokes(cfg);
        case Scenario::shear_energy_audit: return run_shear_energy_audit(cfg);
        case Scenario::multid_xi_sweep: return run_multid_xi_sweep(cfg);
        case Scenario::multid_audits: return run_multid_audits(cfg);
    }
    throw ConfigError("unknown scenario");
}

}  // namespace maxlab::lab
