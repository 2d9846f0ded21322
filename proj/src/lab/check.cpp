#include "maxlab/entropy.hpp"
#include "maxlab/lab.hpp"
#include "maxlab/multid.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <random>

namespace maxlab::lab {

namespace {

using namespace maxlab::multid;
namespace en = maxlab::entropy;

std::string fmt(const char* label, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%.3e", label, v);
    return buf;
}

CheckResult shear_energy_identity() {
    const MaterialParams p{1.0, 0.3, 1.0};
    const auto init = shear1d::ShearState1D::sampled(
        0.0, 1.0, 128, [](double y) { return std::sin(6.283185307179586 * y); }, [](double) { return 0.0; });
    shear1d::RunOptions o;
    o.T = 0.25;
    const auto run = shear1d::run_shear(init, p, shear1d::BoundarySpec::periodic(shear1d::Side::left),
                                        shear1d::BoundarySpec::periodic(shear1d::Side::right), o);
    double worst = 0.0;
    for (const auto& l : run.ledger) worst = std::max(worst, std::abs(l.relative_residual()));
    return {"shear1d energy identity", worst <= 1e-10, fmt("max_relative_residual", worst)};
}

CheckResult gradient_fd(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Eos eos{EosKind::isothermal, 1.0};
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto V = en::to_chart(en::sample_state(rng, en::StateBox{}));
        const auto g = en::grad_eta(V, 2, eos, 1.0);
        en::ChartVector fd(V.size());
        for (Eigen::Index m = 0; m < V.size(); ++m) {
            const double h = 1e-6 * std::max(1.0, std::abs(V[m]));
            auto vp = V, vm = V;
            vp[m] += h;
            vm[m] -= h;
            fd[m] = (en::eta_chart(vp, 2, eos, 1.0) - en::eta_chart(vm, 2, eos, 1.0)) / (2 * h);
        }
        worst = std::max(worst, (fd - g).norm() / g.norm());
    }
    return {"entropy gradient vs finite differences", worst <= 1e-6, fmt("max_relative_error", worst)};
}

CheckResult hessian_psd(std::uint64_t seed) {
    std::mt19937_64 rng(seed + 1);
    const Eos eos{EosKind::isothermal, 1.0};
    double worst = 1.0;
    for (int k = 0; k < 20; ++k) {
        const auto V = en::to_chart(en::sample_state(rng, en::StateBox{}));
        Eigen::SelfAdjointEigenSolver<en::ChartMatrix> es(en::hess_eta(V, 2, eos, 1.0));
        const auto& ev = es.eigenvalues();
        worst = std::min(worst, ev[0] / ev[ev.size() - 1]);
    }
    return {"entropy Hessian positive semidefinite", worst >= -1e-12, fmt("min_eigenvalue_ratio", worst)};
}

CheckResult serial_parallel_equal() {
    const Eos eos{EosKind::isothermal, 1.0};
    const Grid2D g = make_initial_grid(InitialData::deformation_map, 16, 16);
    const double dt = 0.5 * stable_dt(g, eos, 1.0);
    Grid2D a = g, b = g;
    fv_step_serial(g, a, dt, eos, 1.0, 0.3);
    fv_step_parallel(g, b, dt, eos, 1.0, 0.3);
    bool same = true;
    for (std::size_t k = 0; k < a.cells.size(); ++k)
        for (int m = 0; m < a.cells[k].size(); ++m) same = same && a.cells[k][m] == b.cells[k][m];
    return {"serial and parallel steps bitwise equal", same, same ? "identical" : "differ"};
}

CheckResult conservation() {
    const Eos eos{EosKind::isothermal, 1.0};
    Grid2D g = make_initial_grid(InitialData::deformation_map, 16, 16);
    const double dt = 0.5 * stable_dt(g, eos, 1.0);
    auto before = conserved_totals(g);
    double drift = 0.0;
    for (int s = 0; s < 5; ++s) {
        g = fv_step(g, dt, eos, 1.0, 0.3);
        const auto after = conserved_totals(g);
        for (std::size_t m = 0; m < 7; ++m) drift = std::max(drift, std::abs(after[m] - before[m]));
        before = after;
    }
    return {"2D conservation of rho, rho u, rho F", drift <= 1e-12, fmt("max_step_drift", drift)};
}

CheckResult rate_fit_exact() {
    std::vector<RatePair> pairs;
    for (double d : {0.4, 0.2, 0.1, 0.05}) pairs.push_back({d, 3.0 * d});
    const auto r = fit_rate(pairs, 7);
    const double err = std::abs(r.slope - 1.0);
    return {"rate fit on exact linear data", err <= 1e-12, fmt("slope_error", err)};
}

CheckResult csv_round_trip() {
    ResultRow row;
    row.scenario = "shear-xi-sweep";
    row.xi_1 = 0.1;
    row.t = 1.0 / 3.0;
    row.l2_diff = 1e-300;
    const std::string text = format_results({row});
    const bool ok = format_results(parse_results(text)) == text;
    return {"results.csv round trip", ok, ok ? "identical" : "differ"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, e.what()});
        }
    };
    guarded("shear1d energy identity", shear_energy_identity);
    guarded("entropy gradient vs finite differences", [&] { return gradient_fd(seed); });
    guarded("entropy Hessian positive semidefinite", [&] { return hessian_psd(seed); });
    guarded("serial and parallel steps bitwise equal", serial_parallel_equal);
    guarded("2D conservation of rho, rho u, rho F", conservation);
    guarded("rate fit on exact linear data", rate_fit_exact);
    guarded("results.csv round trip", csv_round_trip);
    return out;
}

}  // namespace maxlab::lab
