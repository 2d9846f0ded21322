/// @file core.hpp
/// @brief Material parameters, equation of state, and small dense tensors.
///
/// Everything here is an immutable value type. Tensors are stored dense and
/// row-major; for the deformation gradient F the row is the spatial index i
/// and the column the material index alpha.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace maxlab {

// ============================================================================
// SquareMatrix
// ============================================================================

class SquareMatrix {
public:
    static constexpr int kMaxDim = 3;

    SquareMatrix() = default;
    explicit SquareMatrix(int dim);

    static SquareMatrix zero(int dim) { return SquareMatrix(dim); }
    static SquareMatrix identity(int dim);
    static SquareMatrix diagonal(std::initializer_list<double> entries);
    /// Row-major list of dim*dim entries.
    static SquareMatrix from_rows(int dim, std::initializer_list<double> entries);

    int dim() const { return dim_; }

    double& operator()(int i, int j) { return data_[i * kMaxDim + j]; }
    double operator()(int i, int j) const { return data_[i * kMaxDim + j]; }

    SquareMatrix& operator+=(const SquareMatrix& o);
    SquareMatrix& operator-=(const SquareMatrix& o);
    SquareMatrix& operator*=(double s);

    SquareMatrix transpose() const;
    /// (A + A^T)/2
    SquareMatrix symmetrized() const;
    double trace() const;
    double determinant() const;
    /// Throws DomainError when |det| is not safely non-zero.
    SquareMatrix inverse() const;
    double norm_inf() const;  // max row sum
    double max_abs() const;

    /// Eigenvalues of the symmetric part, ascending. Closed form for d <= 2,
    /// cyclic Jacobi for d = 3.
    std::array<double, kMaxDim> symmetric_eigenvalues() const;
    double min_symmetric_eigenvalue() const;
    double max_symmetric_eigenvalue() const;

    bool operator==(const SquareMatrix& o) const;

private:
    int dim_ = 0;
    std::array<double, kMaxDim * kMaxDim> data_{};
};

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b);
SquareMatrix operator*(SquareMatrix a, double s);
SquareMatrix operator*(double s, SquareMatrix a);
SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b);

/// Frobenius inner product A:B = sum_ij A_ij B_ij.
double frobenius(const SquareMatrix& a, const SquareMatrix& b);

// ============================================================================
// Equation of state
// ============================================================================

enum class EosKind { isothermal };

std::string_view to_string(EosKind kind);

/// Barotropic law given through the specific stored energy e0(nu), nu = 1/rho.
/// Only the isothermal law e0(nu) = -c0^2 ln(nu), p = c0^2 rho is provided.
struct Eos {
    EosKind kind = EosKind::isothermal;
    double c0 = 1.0;

    double e0(double nu) const;
    double de0(double nu) const;   // de0/dnu
    double d2e0(double nu) const;  // d2e0/dnu2
    double pressure(double rho) const;
    /// dp/drho, the squared acoustic speed.
    double dpressure(double rho) const;
    std::string tag() const;
};

/// p(rho) = -e0'(1/rho). Throws DomainError for rho <= 0.
double eos_pressure(const Eos& eos, double rho);

// ============================================================================
// Material parameters
// ============================================================================

/// Relaxation frequency xi = 1/lambda is stored, so elastodynamics is xi = 0.
/// The viscosity mu_dot = G/xi is derived and never stored.
struct MaterialParams {
    double G = 1.0;
    double xi = 0.0;
    double c0 = 1.0;

    /// +inf at xi = 0.
    double mu_dot() const;
    /// +inf at xi = 0.
    double lambda() const;
    Eos eos() const { return Eos{EosKind::isothermal, c0}; }

    /// Throws ConfigError unless G > 0, xi >= 0, c0 > 0 (all finite).
    void validate() const;
};

/// F A F^T, computed so the result is exactly symmetric when A is.
SquareMatrix congruence(const SquareMatrix& F, const SquareMatrix& A);

/// tau = rho G (F A F^T - I). Symmetric whenever A is.
SquareMatrix neo_hookean_stress(double rho, const SquareMatrix& F, const SquareMatrix& A, double G);

}  // namespace maxlab
