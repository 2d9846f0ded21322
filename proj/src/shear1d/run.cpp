#include "maxlab/errors.hpp"
#include "maxlab/shear1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxlab::shear1d {

double energy(const ShearState1D& state, double G) {
    double s = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        s += state.tau[i] * state.tau[i] + G * state.u[i] * state.u[i];
    }
    return s * state.dy();
}

double l2_difference(const ShearState1D& a, const ShearState1D& b) {
    if (a.size() != b.size() || a.y_min != b.y_min || a.y_max != b.y_max) {
        throw ConfigError("l2_difference: grids differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double du = a.u[i] - b.u[i];
        const double dt = a.tau[i] - b.tau[i];
        s += du * du + dt * dt;
    }
    return std::sqrt(s * a.dy());
}

double EnergyLedger::relative_residual() const {
    const double scale = std::max({energy_prev, energy, 1e-300});
    return std::abs(residual) / scale;
}

EnergyLedger energy_audit(const ShearState1D& prev, const StepRecord& step, const MaterialParams& params,
                          const BoundarySpec& bc_left, const BoundarySpec& bc_right) {
    const double G = params.G;
    const double dy = prev.dy();
    EnergyLedger ledger;
    ledger.t = step.t0 + step.dt;
    ledger.dt = step.dt;
    ledger.energy_prev = energy(prev, G);

    double e_next = 0.0;
    double tau_star_sq = 0.0;
    double forcing = 0.0;
    for (std::size_t i = 0; i < step.u.size(); ++i) {
        e_next += step.tau[i] * step.tau[i] + G * step.u[i] * step.u[i];
        tau_star_sq += step.tau_star[i] * step.tau_star[i];
        forcing += G * (step.u[i] * step.u[i] - step.u_star[i] * step.u_star[i]);
    }
    ledger.energy = e_next * dy;
    // int_0^dt 2 xi int tau(s)^2 ds with tau(s) = tau* exp(-xi s).
    ledger.dissipation = -std::expm1(-2.0 * params.xi * step.dt) * tau_star_sq * dy;
    ledger.forcing_work = forcing * dy;

    const BoundaryFlux fl = boundary_energy_flux(bc_left, G, step.traces.left.u, step.traces.left.tau, step.g_left);
    const BoundaryFlux fr = boundary_energy_flux(bc_right, G, step.traces.right.u, step.traces.right.tau, step.g_right);
    ledger.boundary_in = (fl.in + fr.in) * step.dt;
    ledger.boundary_out = (fl.out + fr.out) * step.dt;

    ledger.residual = (ledger.energy - ledger.energy_prev) + ledger.dissipation + ledger.boundary_out -
                      ledger.boundary_in - ledger.forcing_work;
    return ledger;
}

namespace {

bool all_finite(const RiemannFields& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < w.w_plus.size(); ++i) s += w.w_plus[i] + w.w_minus[i];
    return std::isfinite(s);
}

}  // namespace

ShearRun run_shear(const ShearState1D& initial, const MaterialParams& params,
                   const BoundarySpec& bc_left, const BoundarySpec& bc_right,
                   const RunOptions& options) {
    params.validate();
    initial.validate();
    validate_boundaries(bc_left, bc_right, params.G);
    if (!(options.T > 0.0) || !std::isfinite(options.T)) throw ConfigError("run_shear: T must be > 0");
    if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw ConfigError("run_shear: cfl must lie in (0, 1]");

    const double G = params.G;
    const double c = std::sqrt(G);
    const double dy = initial.dy();
    const double dt_nominal = options.cfl * dy / c;
    const auto n_steps = static_cast<std::size_t>(std::ceil(options.T / dt_nominal - 1e-9));

    ShearRun run;
    run.params = params;
    run.bc_left = bc_left;
    run.bc_right = bc_right;
    run.initial = initial;
    run.dt = dt_nominal;
    run.ledger.reserve(n_steps);
    if (options.keep_steps) run.steps.reserve(n_steps);

    std::vector<double> outputs = options.output_times;
    std::sort(outputs.begin(), outputs.end());
    std::size_t next_output = 0;
    auto take_snapshots = [&](const ShearState1D& s, double dt_last) {
        while (next_output < outputs.size() && s.t >= outputs[next_output] - 0.5 * dt_last) {
            run.snapshots.push_back(s);
            ++next_output;
        }
    };

    ShearState1D state = initial;
    take_snapshots(state, dt_nominal);
    RiemannFields w = to_riemann(state, G);

    for (std::size_t n = 0; n < n_steps; ++n) {
        const double t0 = initial.t + static_cast<double>(n) * dt_nominal;
        const double t_end_target = initial.t + options.T;
        const double dt = (n + 1 == n_steps) ? std::min(dt_nominal, t_end_target - t0) : dt_nominal;
        const double t_half = t0 + 0.5 * dt;

        StepRecord rec;
        rec.t0 = t0;
        rec.dt = dt;
        rec.g_left = bc_left.data(t_half);
        rec.g_right = bc_right.data(t_half);
        rec.traces = advect_step(w, G, dt, dy, bc_left, bc_right, rec.g_left, rec.g_right);
        from_riemann(w, G, rec.u_star, rec.tau_star);

        source_step(w, params.xi, dt);
        if (options.forcing) {
            for (std::size_t i = 0; i < state.size(); ++i) {
                const double kick = c * dt * options.forcing(t_half, state.cell_center(i));
                w.w_plus[i] += kick;
                w.w_minus[i] -= kick;
            }
        }
        if (!all_finite(w)) {
            std::ostringstream os;
            os << "run_shear: non-finite value at step " << n << " (t = " << t0 + dt << ", xi = " << params.xi << ")";
            throw NumericalError(os.str());
        }
        from_riemann(w, G, rec.u, rec.tau);

        run.ledger.push_back(energy_audit(state, rec, params, bc_left, bc_right));

        state.u = rec.u;
        state.tau = rec.tau;
        state.t = t0 + dt;
        take_snapshots(state, dt);
        if (options.keep_steps) run.steps.push_back(std::move(rec));
    }
    run.final_state = state;
    return run;
}

namespace {

double decay_integral(double rate, double dt) {
    // int_0^dt exp(-rate s) ds
    return rate == 0.0 ? dt : -std::expm1(-rate * dt) / rate;
}

double rel_energy(const std::vector<double>& u1, const std::vector<double>& t1, const std::vector<double>& u2,
                  const std::vector<double>& t2, double G, double dy) {
    double s = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
        const double du = u1[i] - u2[i];
        const double dtau = t1[i] - t2[i];
        s += dtau * dtau + G * du * du;
    }
    return s * dy;
}

double l2(const std::vector<double>& u1, const std::vector<double>& t1, const std::vector<double>& u2,
          const std::vector<double>& t2, double dy) {
    double s = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
        const double du = u1[i] - u2[i];
        const double dtau = t1[i] - t2[i];
        s += du * du + dtau * dtau;
    }
    return std::sqrt(s * dy);
}

}  // namespace

Prop1Report prop1_audit(const ShearRun& run1, const ShearRun& run2) {
    const double xi1 = run1.params.xi;
    const double xi2 = run2.params.xi;
    if (!(xi1 >= xi2)) throw ConfigError("prop1_audit: need xi_1 >= xi_2");
    if (run1.params.G != run2.params.G) throw ConfigError("prop1_audit: G differs");
    if (run1.steps.size() != run2.steps.size() || run1.steps.empty()) {
        throw ConfigError("prop1_audit: runs need kept, equally many steps");
    }
    if (run1.initial.size() != run2.initial.size() || run1.initial.y_min != run2.initial.y_min ||
        run1.initial.y_max != run2.initial.y_max || run1.dt != run2.dt) {
        throw ConfigError("prop1_audit: grids or time steps differ");
    }
    if (run1.initial.u != run2.initial.u || run1.initial.tau != run2.initial.tau) {
        throw ConfigError("prop1_audit: initial data differ");
    }
    if (run1.bc_left.kind != run2.bc_left.kind || run1.bc_right.kind != run2.bc_right.kind ||
        run1.bc_left.c_u != run2.bc_left.c_u || run1.bc_left.c_tau != run2.bc_left.c_tau ||
        run1.bc_right.c_u != run2.bc_right.c_u || run1.bc_right.c_tau != run2.bc_right.c_tau) {
        throw ConfigError("prop1_audit: boundary conditions differ");
    }

    const double G = run1.params.G;
    const double dy = run1.initial.dy();
    Prop1Report report;
    report.xi_1 = xi1;
    report.xi_2 = xi2;
    report.steps.reserve(run1.steps.size());

    const std::vector<double>* u1_prev = &run1.initial.u;
    const std::vector<double>* t1_prev = &run1.initial.tau;
    const std::vector<double>* u2_prev = &run2.initial.u;
    const std::vector<double>* t2_prev = &run2.initial.tau;
    report.sup_l2_diff = l2(*u1_prev, *t1_prev, *u2_prev, *t2_prev, dy);

    for (std::size_t n = 0; n < run1.steps.size(); ++n) {
        const StepRecord& s1 = run1.steps[n];
        const StepRecord& s2 = run2.steps[n];
        if (s1.g_left != s2.g_left || s1.g_right != s2.g_right || s1.dt != s2.dt) {
            throw ConfigError("prop1_audit: boundary data or step sizes differ");
        }
        const double dt = s1.dt;
        Prop1Step row;
        row.t = s1.t0 + dt;
        row.rel_energy_prev = rel_energy(*u1_prev, *t1_prev, *u2_prev, *t2_prev, G, dy);
        row.rel_energy = rel_energy(s1.u, s1.tau, s2.u, s2.tau, G, dy);

        // The difference of the two runs obeys the homogeneous boundary relation.
        const BoundaryFlux fl = boundary_energy_flux(run1.bc_left, G, s1.traces.left.u - s2.traces.left.u,
                                                     s1.traces.left.tau - s2.traces.left.tau, 0.0);
        const BoundaryFlux fr = boundary_energy_flux(run1.bc_right, G, s1.traces.right.u - s2.traces.right.u,
                                                     s1.traces.right.tau - s2.traces.right.tau, 0.0);
        row.boundary = (fl.out - fl.in + fr.out - fr.in) * dt;

        const double i11 = decay_integral(2.0 * xi1, dt);
        const double i12 = decay_integral(xi1 + xi2, dt);
        const double i22 = decay_integral(2.0 * xi2, dt);
        double diff_sq = 0.0;
        double ref_sq = 0.0;
        for (std::size_t i = 0; i < s1.tau_star.size(); ++i) {
            const double a = s1.tau_star[i];
            const double b = s2.tau_star[i];
            diff_sq += a * a * i11 - 2.0 * a * b * i12 + b * b * i22;
            ref_sq += b * b * i22;
        }
        row.dissipation = (xi1 + xi2) * diff_sq * dy;
        row.rhs = (xi1 - xi2) * ref_sq * dy;
        row.slack = (row.rel_energy - row.rel_energy_prev) + row.boundary + row.dissipation - row.rhs;
        row.l2_diff = l2(s1.u, s1.tau, s2.u, s2.tau, dy);

        report.max_slack = n == 0 ? row.slack : std::max(report.max_slack, row.slack);
        report.sup_l2_diff = std::max(report.sup_l2_diff, row.l2_diff);
        report.steps.push_back(row);

        u1_prev = &s1.u;
        t1_prev = &s1.tau;
        u2_prev = &s2.u;
        t2_prev = &s2.tau;
    }
    return report;
}

}  // namespace maxlab::shear1d
