/// @file multid.hpp
/// @brief Maxwell-fluid system in conserved variables and its 2D finite-volume stepper.
///
/// Conserved variables U = (rho, rho u, rho F, rho A), with
///
///   d_t rho        + d_j (rho u_j)                              = 0
///   d_t (rho u_i)  + d_j (rho u_i u_j + p delta_ij - tau_ij)    = 0
///   d_t (rho F_ia) + d_j (rho (u_j F_ia - u_i F_ja))            = 0
///   d_t (rho A_ab) + d_j (rho A_ab u_j)                         = xi rho (F^-1 F^-T - A)_ab
///
/// and tau = rho G (F A F^T - I). The rho F flux is the curl form of the
/// deformation-gradient transport. Using the involution div(rho F^T) = 0 and
/// mass conservation, d_j(rho u_i F_ja) = rho F_ja d_j u_i, so the equation
/// reduces to (d_t + u.grad) F = (grad u) F. The rho A equation is the
/// relaxation (d_t + u.grad) A = xi (F^-1 F^-T - A) multiplied by rho and
/// combined with mass conservation.
///
/// The stepper is first-order Rusanov (local Lax-Friedrichs) on a periodic
/// Cartesian grid, unsplit in the two directions. The rho F slots are
/// dissipated with the grid-wide speed bound instead of the face speed, which
/// keeps the centred discrete Piola residual at roundoff. A pointwise
/// relaxation of A, solved exactly with F, rho, u frozen at their
/// post-transport values, follows.
#pragma once

#include "maxlab/core.hpp"
#include "maxlab/errors.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace maxlab::multid {

struct PrimitiveStateMD {
    double rho = 1.0;
    std::array<double, 3> u{};
    SquareMatrix F;
    SquareMatrix A;

    int dim() const { return F.dim(); }
    static PrimitiveStateMD rest(int dim);
};

/// Fixed-capacity vector of 1 + d + 2 d^2 slots, ordered (rho, rho u, rho F, rho A).
/// rho F is row-major by (spatial i, material alpha); rho A is stored full and
/// kept symmetric.
class ConservedVector {
public:
    static constexpr int kMaxSize = 1 + 3 + 2 * 9;

    ConservedVector() = default;
    explicit ConservedVector(int dim);

    static int size_for(int dim) { return 1 + dim + 2 * dim * dim; }

    int dim() const { return dim_; }
    int size() const { return size_for(dim_); }

    double& operator[](int k) { return data_[k]; }
    double operator[](int k) const { return data_[k]; }

    static constexpr int rho_index() { return 0; }
    int mom_index(int i) const { return 1 + i; }
    int rhoF_index(int i, int a) const { return 1 + dim_ + i * dim_ + a; }
    int rhoA_index(int a, int b) const { return 1 + dim_ + dim_ * dim_ + a * dim_ + b; }

    double rho() const { return data_[0]; }
    double& rho() { return data_[0]; }
    double mom(int i) const { return data_[mom_index(i)]; }
    double& mom(int i) { return data_[mom_index(i)]; }
    double rhoF(int i, int a) const { return data_[rhoF_index(i, a)]; }
    double& rhoF(int i, int a) { return data_[rhoF_index(i, a)]; }
    double rhoA(int a, int b) const { return data_[rhoA_index(a, b)]; }
    double& rhoA(int a, int b) { return data_[rhoA_index(a, b)]; }

    bool operator==(const ConservedVector& o) const;

private:
    int dim_ = 0;
    std::array<double, kMaxSize> data_{};
};

struct HyperbolicityReport {
    double min_rho = 0.0;
    double min_detF = 0.0;
    double min_eig_A = 0.0;
    bool in_domain = false;
};

HyperbolicityReport hyperbolicity(const PrimitiveStateMD& s);

/// Raised when a state leaves the hyperbolicity domain during a run.
class HyperbolicityLoss : public DomainError {
public:
    HyperbolicityLoss(const std::string& what, HyperbolicityReport report)
        : DomainError(what), report_(report) {}
    const HyperbolicityReport& report() const { return report_; }

private:
    HyperbolicityReport report_;
};

ConservedVector primitive_to_conserved(const PrimitiveStateMD& s);
/// Divides by rho and re-symmetrises A. Throws DomainError for rho <= 0.
PrimitiveStateMD conserved_to_primitive(const ConservedVector& U);

/// Physical flux in direction j (0-based). Throws DomainError for rho <= 0.
ConservedVector flux(const ConservedVector& U, int direction, const Eos& eos, double G);

/// Pi(U): zero except the rho A slot, rho (F^-1 F^-T - A). The caller
/// multiplies by xi. Throws DomainError for singular F.
ConservedVector source_pi(const ConservedVector& U);

/// |u|_inf + sqrt(p'(rho)) + sqrt(G lambda_max(F A F^T) + G).
double max_wavespeed(const ConservedVector& U, const Eos& eos, double G);

// ============================================================================
// Periodic 2D grid
// ============================================================================

struct Grid2D {
    int nx = 0;
    int ny = 0;
    double lx = 1.0;
    double ly = 1.0;
    std::vector<ConservedVector> cells;  // index i + nx * j

    Grid2D() = default;
    Grid2D(int nx, int ny, double lx = 1.0, double ly = 1.0);

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double cell_x(int i) const { return (i + 0.5) * dx(); }
    double cell_y(int j) const { return (j + 0.5) * dy(); }
    ConservedVector& at(int i, int j) { return cells[static_cast<std::size_t>(i + nx * j)]; }
    const ConservedVector& at(int i, int j) const { return cells[static_cast<std::size_t>(i + nx * j)]; }
    /// Periodic wrap for any integer i, j.
    const ConservedVector& wrapped(int i, int j) const;

    bool same_shape(const Grid2D& o) const { return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly; }
};

HyperbolicityReport hyperbolicity(const Grid2D& grid);
double max_wavespeed(const Grid2D& grid, const Eos& eos, double G);

/// Integral of every conserved slot (midpoint rule), size 1 + d + 2 d^2.
std::vector<double> conserved_totals(const Grid2D& grid);

/// Per material index alpha: max over cells of |sum_i D_i (rho F_ia)| with
/// centred differences D_i.
std::array<double, 3> piola_residual(const Grid2D& grid);

/// Largest stable step, 0.45 dx / max wavespeed (dx = min spacing).
constexpr double kCflSafety = 0.45;
double stable_dt(const Grid2D& grid, const Eos& eos, double G);

// ============================================================================
// Initial data on the unit periodic box
// ============================================================================

enum class InitialData {
    /// Inverse map X = x - grad phi, phi = (amp / 8 pi^2) sin(2 pi x) sin(2 pi y):
    /// H = I - hess phi, F = H^-1, rho = det H, rho F = adj H, A = F^-1 F^-T, u = 0.
    /// Satisfies div(rho F^T) = 0 and starts at relaxation equilibrium.
    deformation_map,
    /// rho = 1 + amp sin(2 pi x) sin(2 pi y), u = 0, F = I, A = I.
    uniform_deformation,
};

std::string_view to_string(InitialData kind);
/// Throws ConfigError for unknown names.
InitialData initial_data_from_string(std::string_view name);

Grid2D make_initial_grid(InitialData kind, int nx, int ny, double amplitude = 0.1);

enum class Execution { serial, parallel };

/// Reference implementation: one loop over cells, face fluxes recomputed per cell.
void fv_step_serial(const Grid2D& in, Grid2D& out, double dt, const Eos& eos, double G, double xi);
/// OpenMP kernel: per-cell flux and wave-speed tables, then face fluxes and
/// updates in parallel. Bitwise identical to fv_step_serial for any thread count.
void fv_step_parallel(const Grid2D& in, Grid2D& out, double dt, const Eos& eos, double G, double xi);

/// Checks the CFL bound, steps, then checks the hyperbolicity domain.
/// Throws StabilityError, NumericalError or HyperbolicityLoss.
Grid2D fv_step(const Grid2D& in, double dt, const Eos& eos, double G, double xi,
               Execution exec = Execution::parallel);

/// Exact relaxation of A toward F^-1 F^-T over dt with rho, u, F frozen;
/// symmetrises the rho A slot.
void relax_conformation(ConservedVector& U, double xi, double dt);

}  // namespace maxlab::multid
