#include "maxlab/entropy.hpp"
#include "maxlab/errors.hpp"
#include "maxlab/lab.hpp"
#include "maxlab/multid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxlab::lab {

namespace {

using namespace maxlab::multid;
using nlohmann::json;
namespace en = maxlab::entropy;

/// One dt for every run of a scenario: 0.45 dx / (1.25 s0), shortened so an
/// integer number of steps lands on T. Each step still checks the CFL bound.
struct Schedule {
    double s0 = 0.0;
    double dt = 0.0;
    int steps = 0;
    std::vector<int> output_steps;  // includes 0
};

constexpr double kSpeedMargin = 1.25;

Schedule make_schedule(const Grid2D& g0, const Eos& eos, double G, double T, int output_count) {
    Schedule s;
    s.s0 = max_wavespeed(g0, eos, G);
    const double dt_nominal = kCflSafety * std::min(g0.dx(), g0.dy()) / (kSpeedMargin * s.s0);
    s.steps = static_cast<int>(std::ceil(T / dt_nominal - 1e-9));
    s.dt = T / s.steps;
    s.output_steps.push_back(0);
    for (int j = 1; j <= output_count; ++j) {
        const int k = static_cast<int>(std::lround(static_cast<double>(j) * s.steps / output_count));
        if (k > s.output_steps.back()) s.output_steps.push_back(k);
    }
    return s;
}

Grid2D initial_grid(const ScenarioConfig& cfg, int nx, int ny) {
    return make_initial_grid(initial_data_from_string(cfg.initial_data), nx, ny, cfg.amplitude);
}

double total_energy(const Grid2D& g, const Eos& eos, double G) {
    double s = 0.0;
    for (const auto& U : g.cells) s += en::eta(U, eos, G);
    return s * g.dx() * g.dy();
}

/// int xi (-D eta . Pi) over the grid, the relaxation dissipation rate.
double dissipation_rate(const Grid2D& g, double G, double xi) {
    if (xi == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& U : g.cells) s -= en::entropy_source(conserved_to_primitive(U), G);
    return xi * s * g.dx() * g.dy();
}

double piola_max(const Grid2D& g) {
    const auto r = piola_residual(g);
    return std::max(r[0], r[1]);
}

json hyperbolicity_json(const HyperbolicityReport& r) {
    return {{"min_rho", r.min_rho}, {"min_detF", r.min_detF}, {"min_eig_A", r.min_eig_A}, {"in_domain", r.in_domain}};
}

struct Failure {
    std::string status;
    std::string message;
    json diagnostic;
};

Failure describe(const std::exception& e) {
    Failure f;
    f.message = e.what();
    if (const auto* h = dynamic_cast<const HyperbolicityLoss*>(&e)) {
        f.status = "hyperbolicity-loss";
        f.diagnostic = hyperbolicity_json(h->report());
    } else if (dynamic_cast<const NumericalError*>(&e)) {
        f.status = "numerical-error";
    } else if (dynamic_cast<const StabilityError*>(&e)) {
        f.status = "stability-error";
    } else {
        f.status = "error";
    }
    return f;
}

}  // namespace

ScenarioResult run_multid_xi_sweep(const ScenarioConfig& cfg) {
    const std::string name(to_string(cfg.scenario));
    const Eos eos = cfg.params(0.0).eos();
    const double G = cfg.G;
    const double xi2 = cfg.xi_ref();
    const Grid2D g0 = initial_grid(cfg, cfg.nx, cfg.ny);
    const Schedule sch = make_schedule(g0, eos, G, cfg.T, cfg.output_count);

    ScenarioResult result;
    const double crossing = 1.0 / sch.s0;
    result.report["schedule"] = {{"dt", sch.dt}, {"steps", sch.steps}, {"initial_wavespeed", sch.s0}};
    result.report["horizon"] = {{"box_crossing_time", crossing},
                                {"T_over_crossing", cfg.T / crossing},
                                {"within_quarter_crossing", cfg.T <= 0.25 * crossing}};
    if (cfg.T > 0.25 * crossing) result.report["warnings"].push_back("T exceeds a quarter of the box-crossing time");
    result.report["error_norm"] = "L2 norm of U1 - U2 over all conserved slots at the final time";
    result.report["initial_piola_residual"] = piola_max(g0);

    // Reference run, snapshots at output steps.
    std::vector<Grid2D> ref;
    try {
        Grid2D g = g0;
        std::size_t next = 0;
        for (int k = 0; k <= sch.steps; ++k) {
            if (next < sch.output_steps.size() && sch.output_steps[next] == k) {
                ref.push_back(g);
                ++next;
            }
            if (k < sch.steps) g = fv_step(g, sch.dt, eos, G, xi2);
        }
    } catch (const std::exception& e) {
        const Failure f = describe(e);
        result.ok = false;
        result.report["reference"] = {{"xi", xi2}, {"status", f.status}, {"message", f.message},
                                      {"diagnostic", f.diagnostic}};
        return result;
    }
    result.report["reference"] = {{"xi", xi2}, {"status", "ok"}};

    json points = json::array();
    std::vector<RatePair> pairs;
    double band_lo = std::numeric_limits<double>::infinity();
    double band_hi = 0.0;
    std::vector<double> ratios;
    bool re_positive = true;

    for (double xi1 : cfg.xi_list) {
        json p = {{"xi_1", xi1}, {"xi_2", xi2}};
        std::vector<ResultRow> rows;
        try {
            Grid2D g = g0;
            double dissipated = 0.0;
            double final_l2 = 0.0;
            double min_re = std::numeric_limits<double>::infinity();
            std::size_t next = 0;
            for (int k = 0; k <= sch.steps; ++k) {
                if (next < sch.output_steps.size() && sch.output_steps[next] == k) {
                    const en::RelEntropyReport re = en::relative_entropy(g, ref[next], eos, G);
                    ResultRow row;
                    row.scenario = name;
                    row.xi_1 = xi1;
                    row.xi_2 = xi2;
                    row.t = k * sch.dt;
                    row.l2_diff = re.l2_diff;
                    row.rel_entropy = re.rel_entropy;
                    row.energy = total_energy(g, eos, G);
                    row.dissipation = dissipated;
                    row.piola_residual = piola_max(g);
                    rows.push_back(row);
                    final_l2 = re.l2_diff;
                    if (k > 0 && xi1 != xi2) {
                        min_re = std::min(min_re, re.rel_entropy);
                        if (!(re.rel_entropy > 0.0)) re_positive = false;
                        if (re.a_upper > 0.0) {
                            band_lo = std::min(band_lo, re.a_lower);
                            band_hi = std::max(band_hi, re.a_upper);
                            ratios.push_back(re.rel_entropy / (re.l2_diff * re.l2_diff));
                        }
                    }
                    ++next;
                }
                if (k < sch.steps) {
                    g = fv_step(g, sch.dt, eos, G, xi1);
                    dissipated += sch.dt * dissipation_rate(g, G, xi1);
                }
            }
            p["status"] = "ok";
            p["final_l2_diff"] = final_l2;
            if (xi1 != xi2) {
                p["min_rel_entropy"] = min_re;
                if (final_l2 > 1e-12) pairs.push_back({std::abs(xi1 - xi2), final_l2});
            }
            result.rows.insert(result.rows.end(), rows.begin(), rows.end());
        } catch (const std::exception& e) {
            const Failure f = describe(e);
            p["status"] = f.status;
            p["message"] = f.message;
            p["diagnostic"] = f.diagnostic;
        }
        points.push_back(p);
    }
    result.report["points"] = points;
    result.report["rel_entropy_positive"] = re_positive;

    bool in_band = !ratios.empty();
    for (double r : ratios) in_band = in_band && r >= band_lo * (1.0 - 1e-9) && r <= band_hi * (1.0 + 1e-9);
    result.report["equivalence"] = {{"a_lower", std::isfinite(band_lo) ? band_lo : 0.0},
                                    {"a_upper", band_hi},
                                    {"ratio_min", ratios.empty() ? 0.0 : *std::min_element(ratios.begin(), ratios.end())},
                                    {"ratio_max", ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end())},
                                    {"ratios_in_band", in_band}};
    try {
        result.report["fit"] = to_json(fit_rate(pairs, cfg.seed));
    } catch (const DataError& e) {
        result.report["fit"] = nullptr;
        result.report["fit_error"] = e.what();
    }
    return result;
}

namespace {

struct AuditRun {
    double conservation_drift = 0.0;  // max per-step |change| of totals of rho, rho u, rho F
    double piola_initial = 0.0;
    double piola_final = 0.0;
    double constitutive_final = 0.0;
    double entropy_balance_final = 0.0;
    std::vector<ResultRow> rows;
    Schedule schedule;
};

/// Runs to T plus one extra step so the centred time difference exists at T.
AuditRun audit_run(const ScenarioConfig& cfg, int nx, int ny, double xi) {
    const std::string name(to_string(cfg.scenario));
    const MaterialParams params = cfg.params(xi);
    const Eos eos = params.eos();
    const double G = cfg.G;
    const Grid2D g0 = initial_grid(cfg, nx, ny);
    AuditRun a;
    a.schedule = make_schedule(g0, eos, G, cfg.T, cfg.output_count);
    const Schedule& sch = a.schedule;
    a.piola_initial = piola_max(g0);

    const int n_conserved = 1 + 2 + 4;  // rho, rho u, rho F
    auto totals = conserved_totals(g0);

    Grid2D prev = g0;
    Grid2D cur = g0;
    double dissipated = 0.0;
    std::size_t next = 0;
    auto emit = [&](int k, const std::optional<double>& constitutive) {
        ResultRow row;
        row.scenario = name;
        row.xi_1 = xi;
        row.t = k * sch.dt;
        row.energy = total_energy(cur, eos, G);
        row.dissipation = dissipated;
        row.piola_residual = piola_max(cur);
        row.constitutive_residual = constitutive;
        a.rows.push_back(row);
    };
    emit(0, std::nullopt);
    ++next;
    for (int k = 0; k <= sch.steps; ++k) {
        Grid2D nxt = fv_step(cur, sch.dt, eos, G, xi);
        const auto t_new = conserved_totals(nxt);
        for (int m = 0; m < n_conserved; ++m) {
            const auto idx = static_cast<std::size_t>(m);
            a.conservation_drift = std::max(a.conservation_drift, std::abs(t_new[idx] - totals[idx]));
        }
        totals = t_new;
        if (k >= 1 && next < sch.output_steps.size() && sch.output_steps[next] == k) {
            const auto cr = en::constitutive_residual(prev, cur, nxt, sch.dt, params);
            emit(k, cr.consistent);
            if (k == sch.steps) {
                a.constitutive_final = cr.consistent;
                a.entropy_balance_final = en::entropy_balance_residual(prev, cur, nxt, sch.dt, eos, G, xi);
                a.piola_final = piola_max(cur);
            }
            ++next;
        }
        if (k == sch.steps) break;
        prev = std::move(cur);
        cur = std::move(nxt);
        dissipated += sch.dt * dissipation_rate(cur, G, xi);
    }
    return a;
}

}  // namespace

ScenarioResult run_multid_audits(const ScenarioConfig& cfg) {
    const double xi = cfg.xi_list.front();
    const MaterialParams params = cfg.params(xi);
    const Eos eos = params.eos();
    ScenarioResult result;
    try {
        const AuditRun base = audit_run(cfg, cfg.nx, cfg.ny, xi);
        result.rows = base.rows;
        result.report["xi"] = xi;
        result.report["schedule"] = {{"dt", base.schedule.dt}, {"steps", base.schedule.steps},
                                     {"initial_wavespeed", base.schedule.s0}};
        result.report["conservation_drift_per_step"] = base.conservation_drift;
        result.report["piola"] = {{"initial", base.piola_initial},
                                  {"final", base.piola_final},
                                  {"ratio", base.piola_initial > 0.0 ? base.piola_final / base.piola_initial : 0.0}};
        result.report["constitutive_residual_final"] = base.constitutive_final;
        result.report["entropy_balance_residual_final"] = base.entropy_balance_final;

        // Uniform relaxation equilibrium: one step must leave it unchanged.
        PrimitiveStateMD s = PrimitiveStateMD::rest(2);
        s.rho = 1.3;
        s.u = {0.2, -0.1, 0.0};
        s.F = SquareMatrix::from_rows(2, {1.1, 0.2, -0.1, 0.9});
        s.A = congruence(s.F.inverse(), SquareMatrix::identity(2));  // F^-1 F^-T
        Grid2D uniform(8, 8);
        for (auto& U : uniform.cells) U = primitive_to_conserved(s);
        const Grid2D stepped = fv_step(uniform, 0.5 * stable_dt(uniform, eos, cfg.G), eos, cfg.G, xi);
        double change = 0.0;
        for (std::size_t k = 0; k < uniform.cells.size(); ++k)
            for (int m = 0; m < uniform.cells[k].size(); ++m)
                change = std::max(change, std::abs(stepped.cells[k][m] - uniform.cells[k][m]));
        result.report["equilibrium_fixed_point_change"] = change;

        json levels = json::array();
        double prev_c = 0.0, prev_e = 0.0;
        for (int n : cfg.refinement) {
            const AuditRun r = audit_run(cfg, n, n, xi);
            json level = {{"n", n},
                          {"dt", r.schedule.dt},
                          {"steps", r.schedule.steps},
                          {"constitutive_residual", r.constitutive_final},
                          {"entropy_balance_residual", r.entropy_balance_final},
                          {"piola_initial", r.piola_initial},
                          {"piola_final", r.piola_final}};
            if (!levels.empty()) {
                level["constitutive_ratio"] = prev_c / r.constitutive_final;
                level["entropy_balance_ratio"] = prev_e / r.entropy_balance_final;
            }
            prev_c = r.constitutive_final;
            prev_e = r.entropy_balance_final;
            levels.push_back(level);
        }
        result.report["refinement"] = levels;
    } catch (const std::exception& e) {
        const Failure f = describe(e);
        result.ok = false;
        result.report["status"] = f.status;
        result.report["message"] = f.message;
        result.report["diagnostic"] = f.diagnostic;
    }
    return result;
}

}  // namespace maxlab::lab
