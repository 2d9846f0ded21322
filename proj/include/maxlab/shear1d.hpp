/// @file shear1d.hpp
/// @brief 1D damped shear waves: d_t u - d_y tau = f, d_t tau - G d_y u = -xi tau.
///
/// The solver works on the Riemann variables w+ = tau + sqrt(G) u and
/// w- = tau - sqrt(G) u, which satisfy
///
///     d_t w+ - sqrt(G) d_y w+ = +sqrt(G) f - (xi/2)(w+ + w-)
///     d_t w- + sqrt(G) d_y w- = -sqrt(G) f - (xi/2)(w+ + w-)
///
/// so w+ travels at speed -sqrt(G) (leftwards) and w- at +sqrt(G). Every
/// upwind direction and every incoming/outgoing label in this module follows
/// from that one convention: at y_min the outgoing variable is w+ and the
/// incoming one w-; at y_max the roles swap.
///
/// A step is Lie splitting, transport first: first-order upwind transport of
/// each Riemann variable, then the exact solution of the pointwise source ODE
/// (tau <- tau exp(-xi dt), u <- u + dt f(t_{n+1/2}, y)). At CFL = 1 both
/// sub-steps are exact, so the discrete energy identity and the difference
/// inequality between two relaxation frequencies hold to rounding.
///
/// Energy normalisation: E = int (|w+|^2 + |w-|^2)/2 = int (tau^2 + G u^2).
/// With it the balance reads
///
///     dE/dt + (xi/2) int (w+ + w-)^2 + [boundary out] = sqrt(G) int f (w+ - w-) + [boundary in]
///
/// and the boundary terms of a maximally dissipative condition
/// c_u u + c_tau tau = g are G/(2|c_u c_tau|) z^2 (out, z = c_u u - c_tau tau)
/// and G/(2|c_u c_tau|) g^2 (in), each evaluated at its own boundary.
#pragma once

#include "maxlab/core.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace maxlab::shear1d {

// ============================================================================
// State and boundary conditions
// ============================================================================

struct ShearState1D {
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<double> u;
    std::vector<double> tau;
    double t = 0.0;

    /// Zero fields on N uniform cells.
    static ShearState1D zeros(double y_min, double y_max, std::size_t n);
    /// Cell-centred sampling of u0(y), tau0(y).
    static ShearState1D sampled(double y_min, double y_max, std::size_t n,
                                const std::function<double(double)>& u0,
                                const std::function<double(double)>& tau0);

    std::size_t size() const { return u.size(); }
    double dy() const { return (y_max - y_min) / static_cast<double>(u.size()); }
    double cell_center(std::size_t i) const { return y_min + (static_cast<double>(i) + 0.5) * dy(); }

    /// Throws ConfigError on an empty/degenerate grid, mismatched or non-finite arrays.
    void validate() const;
};

enum class Side { left, right };
enum class BoundaryKind { dissipative, dirichlet_velocity, periodic };

using BoundaryData = std::function<double(double t)>;

/// One boundary relation c_u u + c_tau tau = g(t).
struct BoundarySpec {
    Side side = Side::left;
    BoundaryKind kind = BoundaryKind::periodic;
    double c_u = 0.0;
    double c_tau = 0.0;
    BoundaryData g;

    static BoundarySpec periodic(Side side);
    /// Maximally dissipative: c_u c_tau < 0 on the left, > 0 on the right.
    static BoundarySpec dissipative(Side side, double c_u, double c_tau, BoundaryData g = {});
    /// u = g(t); the degenerate c_tau = 0 case used by the Stokes problem.
    static BoundarySpec dirichlet_velocity(Side side, BoundaryData g = {});

    double data(double t) const { return g ? g(t) : 0.0; }

    /// Sign classes of a maximally dissipative condition; throws ConfigError.
    void validate(double G) const;
};

/// Throws ConfigError unless both sides are consistently configured.
void validate_boundaries(const BoundarySpec& left, const BoundarySpec& right, double G);

// ============================================================================
// Riemann variables and the two sub-steps
// ============================================================================

struct RiemannFields {
    std::vector<double> w_plus;
    std::vector<double> w_minus;
};

RiemannFields to_riemann(const ShearState1D& state, double G);
/// Writes u, tau (resized) from the Riemann variables.
void from_riemann(const RiemannFields& w, double G, std::vector<double>& u, std::vector<double>& tau);

/// Boundary state seen by the transport sub-step: the outgoing characteristic
/// value, the reconstructed incoming one, and the (u, tau) they encode.
struct BoundaryTrace {
    double w_out = 0.0;
    double w_in = 0.0;
    double u = 0.0;
    double tau = 0.0;
};

struct AdvectTraces {
    BoundaryTrace left;
    BoundaryTrace right;
};

/// Upwind transport of both Riemann variables over dt on spacing dy.
/// Throws StabilityError when sqrt(G) dt/dy > 1 and SingularBoundaryError when
/// a boundary relation cannot be solved for the incoming variable.
AdvectTraces advect_step(RiemannFields& w, double G, double dt, double dy,
                         const BoundarySpec& left, const BoundarySpec& right,
                         double g_left, double g_right);

/// Exact flow of d/dt (w+, w-) = -(xi/2)(w+ + w-)(1, 1): tau decays by
/// exp(-xi dt), u is untouched.
void source_step(RiemannFields& w, double xi, double dt);

// ============================================================================
// Runs, energy ledger, difference inequality
// ============================================================================

using Forcing = std::function<double(double t, double y)>;

/// Everything needed to audit one step after the fact.
struct StepRecord {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> u_star;    // after transport, before source
    std::vector<double> tau_star;  // after transport, before source
    std::vector<double> u;         // end of step
    std::vector<double> tau;       // end of step
    AdvectTraces traces;
    double g_left = 0.0;
    double g_right = 0.0;
};

/// Terms of the discrete energy balance over one step, in energy units
/// (rates integrated over the step). residual is the only signed free term:
/// residual = (energy - energy_prev) + dissipation + boundary_out - boundary_in - forcing_work.
struct EnergyLedger {
    double t = 0.0;
    double dt = 0.0;
    double energy_prev = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double boundary_in = 0.0;
    double boundary_out = 0.0;
    double forcing_work = 0.0;
    double residual = 0.0;

    double dissipation_rate() const { return dt > 0.0 ? dissipation / dt : 0.0; }
    double relative_residual() const;
};

struct RunOptions {
    double T = 1.0;
    double cfl = 1.0;
    Forcing forcing;                    // empty: f = 0
    std::vector<double> output_times;   // snapshots taken at the nearest step end
    bool keep_steps = false;            // needed by prop1_audit
};

struct ShearRun {
    MaterialParams params;
    BoundarySpec bc_left;
    BoundarySpec bc_right;
    ShearState1D initial;
    double dt = 0.0;
    std::vector<ShearState1D> snapshots;
    std::vector<EnergyLedger> ledger;
    std::vector<StepRecord> steps;
    ShearState1D final_state;
};

/// E = int (tau^2 + G u^2), midpoint rule.
double energy(const ShearState1D& state, double G);
/// sqrt(int (u1-u2)^2 + (tau1-tau2)^2). Throws ConfigError on grid mismatch.
double l2_difference(const ShearState1D& a, const ShearState1D& b);

/// Integrates from initial to T. Throws what the sub-steps throw and
/// NumericalError (with step index and time) on non-finite values.
ShearRun run_shear(const ShearState1D& initial, const MaterialParams& params,
                   const BoundarySpec& bc_left, const BoundarySpec& bc_right,
                   const RunOptions& options);

/// Boundary energy flux of one side for boundary state (u, tau) and data g.
struct BoundaryFlux {
    double in = 0.0;
    double out = 0.0;
};
BoundaryFlux boundary_energy_flux(const BoundarySpec& bc, double G, double u, double tau, double g);

EnergyLedger energy_audit(const ShearState1D& prev, const StepRecord& step, const MaterialParams& params,
                          const BoundarySpec& bc_left, const BoundarySpec& bc_right);

/// One step of the difference inequality between runs with xi1 >= xi2:
///   dD + boundary + (xi1+xi2) int_step int (tau1-tau2)^2 <= (xi1-xi2) int_step int tau2^2,
/// D = int (|w1+ - w2+|^2 + |w1- - w2-|^2)/2, time integrals exact over the source sub-step.
struct Prop1Step {
    double t = 0.0;
    double rel_energy_prev = 0.0;
    double rel_energy = 0.0;
    double boundary = 0.0;
    double dissipation = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // lhs - rhs, must be <= tolerance
    double l2_diff = 0.0;
};

struct Prop1Report {
    double xi_1 = 0.0;
    double xi_2 = 0.0;
    std::vector<Prop1Step> steps;
    double max_slack = 0.0;
    double sup_l2_diff = 0.0;  // includes t = 0
};

/// Requires both runs with keep_steps, identical grids, dt, initial data and
/// boundary coefficients; throws ConfigError otherwise.
Prop1Report prop1_audit(const ShearRun& run1, const ShearRun& run2);

}  // namespace maxlab::shear1d
