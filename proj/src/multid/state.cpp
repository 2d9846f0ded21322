#include "maxlab/multid.hpp"

#include <algorithm>
#include <cmath>

namespace maxlab::multid {

PrimitiveStateMD PrimitiveStateMD::rest(int dim) {
    PrimitiveStateMD s;
    s.rho = 1.0;
    s.F = SquareMatrix::identity(dim);
    s.A = SquareMatrix::identity(dim);
    return s;
}

ConservedVector::ConservedVector(int dim) : dim_(dim) {
    if (dim < 1 || dim > 3) throw ConfigError("ConservedVector dimension must be 1, 2 or 3");
}

bool ConservedVector::operator==(const ConservedVector& o) const {
    if (dim_ != o.dim_) return false;
    for (int k = 0; k < size(); ++k)
        if (data_[k] != o.data_[k]) return false;
    return true;
}

HyperbolicityReport hyperbolicity(const PrimitiveStateMD& s) {
    HyperbolicityReport r;
    r.min_rho = s.rho;
    r.min_detF = s.F.determinant();
    r.min_eig_A = s.A.min_symmetric_eigenvalue();
    r.in_domain = r.min_rho > 0.0 && r.min_detF > 0.0 && r.min_eig_A > 0.0;
    return r;
}

ConservedVector primitive_to_conserved(const PrimitiveStateMD& s) {
    const int d = s.dim();
    ConservedVector U(d);
    U.rho() = s.rho;
    for (int i = 0; i < d; ++i) U.mom(i) = s.rho * s.u[static_cast<std::size_t>(i)];
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) U.rhoF(i, a) = s.rho * s.F(i, a);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) U.rhoA(a, b) = s.rho * s.A(a, b);
    return U;
}

PrimitiveStateMD conserved_to_primitive(const ConservedVector& U) {
    const int d = U.dim();
    const double rho = U.rho();
    if (!(rho > 0.0)) throw DomainError("conserved_to_primitive: density must be positive");
    PrimitiveStateMD s;
    s.rho = rho;
    s.F = SquareMatrix(d);
    s.A = SquareMatrix(d);
    for (int i = 0; i < d; ++i) s.u[static_cast<std::size_t>(i)] = U.mom(i) / rho;
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) s.F(i, a) = U.rhoF(i, a) / rho;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) s.A(a, b) = U.rhoA(a, b) / rho;
    s.A = s.A.symmetrized();
    return s;
}

ConservedVector flux(const ConservedVector& U, int direction, const Eos& eos, double G) {
    const int d = U.dim();
    const int j = direction;
    const PrimitiveStateMD s = conserved_to_primitive(U);
    const SquareMatrix tau = neo_hookean_stress(s.rho, s.F, s.A, G);
    const double p = eos.pressure(s.rho);
    const auto& u = s.u;
    const double uj = u[static_cast<std::size_t>(j)];

    ConservedVector f(d);
    f.rho() = U.mom(j);
    for (int i = 0; i < d; ++i) {
        f.mom(i) = U.mom(i) * uj - tau(i, j) + (i == j ? p : 0.0);
    }
    for (int i = 0; i < d; ++i) {
        const double ui = u[static_cast<std::size_t>(i)];
        for (int a = 0; a < d; ++a) {
            f.rhoF(i, a) = uj * U.rhoF(i, a) - ui * U.rhoF(j, a);
        }
    }
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) f.rhoA(a, b) = U.rhoA(a, b) * uj;
    return f;
}

ConservedVector source_pi(const ConservedVector& U) {
    const int d = U.dim();
    const PrimitiveStateMD s = conserved_to_primitive(U);
    const SquareMatrix Finv = s.F.inverse();
    const SquareMatrix a_eq = congruence(Finv, SquareMatrix::identity(d));
    ConservedVector pi(d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) pi.rhoA(a, b) = s.rho * (a_eq(a, b) - s.A(a, b));
    return pi;
}

double max_wavespeed(const ConservedVector& U, const Eos& eos, double G) {
    const PrimitiveStateMD s = conserved_to_primitive(U);
    double umax = 0.0;
    for (int i = 0; i < s.dim(); ++i) umax = std::max(umax, std::abs(s.u[static_cast<std::size_t>(i)]));
    const double c_acoustic = std::sqrt(eos.dpressure(s.rho));
    const double lmax = congruence(s.F, s.A).max_symmetric_eigenvalue();
    const double c_shear = std::sqrt(G * std::max(lmax, 0.0) + G);
    return umax + c_acoustic + c_shear;
}

void relax_conformation(ConservedVector& U, double xi, double dt) {
    const int d = U.dim();
    if (xi == 0.0) {
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                const double v = 0.5 * (U.rhoA(a, b) + U.rhoA(b, a));
                U.rhoA(a, b) = v;
                U.rhoA(b, a) = v;
            }
        return;
    }
    const PrimitiveStateMD s = conserved_to_primitive(U);
    const SquareMatrix a_eq = congruence(s.F.inverse(), SquareMatrix::identity(d));
    const double decay = std::exp(-xi * dt);
    SquareMatrix a_new = a_eq + (s.A - a_eq) * decay;
    a_new = a_new.symmetrized();
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) U.rhoA(a, b) = s.rho * a_new(a, b);
}

}  // namespace maxlab::multid
