/// @file entropy.hpp
/// @brief Energy density, its derivatives, relative entropy and a-posteriori residuals.
///
/// Energy density (per unit volume)
///
///   eta = rho |u|^2 / 2 + rho e0(1/rho) + rho (G/2) F A : F + G rho ln rho.
///
/// The last term stores the work of the spherical part -rho G I of
/// tau = rho G (F A F^T - I): rho D/Dt(G ln rho) = -rho G div u by mass
/// conservation, so eta satisfies
///
///   d_t eta + d_a Q_a = xi D eta . Pi,   Q_a = u_a (eta + p) - tau_ia u_i,
///
/// exactly for smooth solutions. Without it the balance carries a spurious
/// rho G div u. For compatible states (rho det F = 1) the term equals the
/// neo-Hookean volumetric energy -rho G ln det F.
///
/// Entropy chart
/// -------------
/// eta is linear in A at fixed (rho, F), so it has no convex representation
/// in (rho, rho u, rho F, rho A). It is convex in the conserved chart
///
///   V = (rho, m, P, Y) = (rho, rho u, rho F, rho A^-1),
///
/// with Y symmetric and packed by its upper triangle (a <= b), so V has
/// 1 + d + d^2 + d(d+1)/2 components. Y obeys the balance law
/// d_t Y + div(Y u) = xi rho (A^-1 - A^-1 F^-1 F^-T A^-1), obtained from the
/// relaxation of A and mass conservation. In V,
///
///   eta = |m|^2/(2 rho) + rho e0(1/rho) + G rho ln rho + (G/2) tr(P Y^-1 P^T).
///
/// The kinetic term is a perspective of |.|^2, rho e0(1/rho) + G rho ln rho
/// is strictly convex in rho, and tr(P Y^-1 P^T) is the matrix-fractional
/// function. The last one is degenerate: D2 eta vanishes on the
/// d(d+1)/2-dimensional space {delta P = P Y^-1 Z, delta Y = Z, others 0},
/// so D2 eta is positive semi-definite, not definite.
///
/// Gradient (with u = m/rho, F = P/rho, A = rho Y^-1, p = -e0'(1/rho))
///
///   d eta/d rho = -|u|^2/2 + e0 + p/rho + G (ln rho + 1)
///   d eta/d m   = u
///   d eta/d P   = G F A
///   d eta/d Y   = -(G/2) A F^T F A     (symmetric; off-diagonal packed
///                                       coordinates pick up a factor 2)
///
/// Hessian, as the bilinear form on directions (r, n, Q, Z) = (delta rho,
/// delta m, delta P, delta Y):
///
///   D2eta = (|m|^2/rho^3 + e0''(1/rho)/rho^3 + G/rho) r1 r2
///         - (r1 u.n2 + r2 u.n1)/rho + n1.n2/rho
///         + G tr(Q1 Y^-1 Q2^T)
///         - G tr(Q1 Y^-1 Z2 Y^-1 P^T) - G tr(Q2 Y^-1 Z1 Y^-1 P^T)
///         + G tr(P Y^-1 Z1 Y^-1 Z2 Y^-1 P^T).
///
/// The matrix is assembled by evaluating this form on the coordinate basis.
/// States passed to this module must lie in the hyperbolicity domain with
/// det F > 0.
#pragma once

#include "maxlab/core.hpp"
#include "maxlab/multid.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace maxlab::entropy {

using multid::ConservedVector;
using multid::Grid2D;
using multid::PrimitiveStateMD;

using ChartVector = Eigen::VectorXd;
using ChartMatrix = Eigen::MatrixXd;

// ============================================================================
// Chart
// ============================================================================

int chart_size(int dim);
int chart_mom_index(int dim, int i);
int chart_P_index(int dim, int i, int a);
/// Packed index of Y_ab = Y_ba.
int chart_Y_index(int dim, int a, int b);

/// Throws DomainError outside the hyperbolicity domain or for det F <= 0.
ChartVector to_chart(const PrimitiveStateMD& s);
ChartVector to_chart(const ConservedVector& U);
/// Throws DomainError when rho <= 0 or Y is singular.
PrimitiveStateMD from_chart(const ChartVector& V, int dim);

// ============================================================================
// Energy density and derivatives
// ============================================================================

struct EntropyEval {
    double eta = 0.0;
    ChartVector grad;
    ChartMatrix hess;
};

double eta(const PrimitiveStateMD& s, const Eos& eos, double G);
double eta(const ConservedVector& U, const Eos& eos, double G);
double eta_chart(const ChartVector& V, int dim, const Eos& eos, double G);

ChartVector grad_eta(const ChartVector& V, int dim, const Eos& eos, double G);
ChartMatrix hess_eta(const ChartVector& V, int dim, const Eos& eos, double G);
EntropyEval evaluate(const ChartVector& V, int dim, const Eos& eos, double G);
EntropyEval evaluate(const ConservedVector& U, const Eos& eos, double G);

/// Q_a = u_a (eta + p) - tau_ia u_i.
std::array<double, 3> entropy_flux(const PrimitiveStateMD& s, const Eos& eos, double G);

/// D eta . Pi per unit xi: rho (G/2) tr(F (F^-1 F^-T - A) F^T) = rho (G/2)(d - tr(F A F^T)).
double entropy_source(const PrimitiveStateMD& s, double G);

// ============================================================================
// Relative entropy
// ============================================================================

/// eta(V1) - eta(V2) - D eta(V2).(V1 - V2).
double relative_entropy_density(const ChartVector& V1, const ChartVector& V2, int dim,
                                const Eos& eos, double G);

struct RelEntropyReport {
    double rel_entropy = 0.0;  // midpoint-rule integral
    double l2_diff = 0.0;      // L2 norm of U1 - U2 over all stepper slots
    /// Cellwise min / max of the density ratio rel_entropy / |U1 - U2|^2 over
    /// cells where the two states differ; zero when they never do.
    double a_lower = 0.0;
    double a_upper = 0.0;
    double min_cell = 0.0;  // smallest cellwise relative-entropy density
};

/// Throws ConfigError on grid mismatch, DomainError outside the domain.
RelEntropyReport relative_entropy(const Grid2D& U1, const Grid2D& U2, const Eos& eos, double G);

/// Z = D eta(V1) - D eta(V2) - D2 eta(V2)(V1 - V2).
ChartVector taylor_remainder_Z(const ChartVector& V1, const ChartVector& V2, int dim,
                               const Eos& eos, double G);

/// Same quantity for an arbitrary entropy given by its gradient and Hessian.
ChartVector taylor_remainder_Z(const ChartVector& V1, const ChartVector& V2,
                               const std::function<ChartVector(const ChartVector&)>& grad,
                               const std::function<ChartMatrix(const ChartVector&)>& hess);

// ============================================================================
// Sampling boxes and the source bound
// ============================================================================

/// Compact in-domain box. F = R(t1) diag(s) R(t2) with s in [s_min, s_max];
/// A = R(t) diag(a) R(t)^T with a in [a_min, a_max].
struct StateBox {
    double rho_min = 0.5, rho_max = 2.0;
    double u_max = 1.0;
    double s_min = 0.5, s_max = 2.0;
    double a_min = 0.5, a_max = 2.0;
};

/// Only d = 2 is sampled.
PrimitiveStateMD sample_state(std::mt19937_64& rng, const StateBox& box, int dim = 2);

struct SourceBoundsReport {
    StateBox box;
    int samples = 0;
    std::uint64_t seed = 0;
    /// Per stepper slot m: sup |dPi_m| / |dU| and sup |dPi_m - DPi_m dU| / |dU|^2.
    std::vector<double> lipschitz;
    std::vector<double> remainder;
    double lipschitz_max = 0.0;
    double remainder_max = 0.0;
};

/// Draws `samples` pairs U1 in the box, U2 = U1 + r W with |W| = 1 and
/// r in [1e-3, 1e-1] relative to |U1|. DPi by central differences.
SourceBoundsReport source_bounds_check(const StateBox& box, int samples, std::uint64_t seed);

// ============================================================================
// A-posteriori residuals on snapshot triples (t - dt, t, t + dt)
// ============================================================================

/// max over cells of |d_t eta + d_a Q_a - xi D eta . Pi| at the middle
/// snapshot, centred differences in time and space.
double entropy_balance_residual(const Grid2D& prev, const Grid2D& cur, const Grid2D& next,
                                double dt, const Eos& eos, double G, double xi);

/// Residual for each interior snapshot of a uniformly spaced series.
std::vector<double> entropy_balance_series(const std::vector<Grid2D>& snapshots, double dt,
                                           const Eos& eos, double G, double xi);

struct ConstitutiveResidual {
    /// max |lambda (tau^UC + (div u) tau) + tau - 2 rho mu_dot D| (xi > 0), or
    /// max |tau^UC + (div u) tau + xi tau - 2 rho G D| when xi = 0.
    double consistent = 0.0;
    /// Same without the (div u) tau and density factors:
    /// lambda tau^UC + tau - 2 mu_dot D, or tau^UC + xi tau - 2 G D at xi = 0.
    double literal = 0.0;
    /// Componentwise max of |literal| residual.
    SquareMatrix literal_components;
    /// True when the xi-multiplied forms were used (xi = 0).
    bool rescaled = false;
};

ConstitutiveResidual constitutive_residual(const Grid2D& prev, const Grid2D& cur, const Grid2D& next,
                                           double dt, const MaterialParams& params);

std::vector<ConstitutiveResidual> constitutive_series(const std::vector<Grid2D>& snapshots, double dt,
                                                      const MaterialParams& params);

}  // namespace maxlab::entropy
