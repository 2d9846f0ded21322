#include "maxlab/entropy.hpp"

#include <cmath>
#include <utility>

namespace maxlab::entropy {

namespace {

struct Direction {
    double r = 0.0;
    std::array<double, 3> n{};
    SquareMatrix Q;
    SquareMatrix Z;
};

struct ChartState {
    int d = 0;
    double rho = 0.0;
    std::array<double, 3> m{};
    SquareMatrix P;
    SquareMatrix Y;
};

ChartState unpack(const ChartVector& V, int d) {
    if (V.size() != chart_size(d)) throw ConfigError("entropy chart vector has the wrong length");
    ChartState c;
    c.d = d;
    c.rho = V(0);
    c.P = SquareMatrix(d);
    c.Y = SquareMatrix(d);
    for (int i = 0; i < d; ++i) c.m[static_cast<std::size_t>(i)] = V(chart_mom_index(d, i));
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) c.P(i, a) = V(chart_P_index(d, i, a));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) c.Y(a, b) = V(chart_Y_index(d, a, b));
    if (!(c.rho > 0.0)) throw DomainError("entropy chart: density must be positive");
    if (!(c.P.determinant() > 0.0)) throw DomainError("entropy chart: det(rho F) must be positive");
    if (!(c.Y.min_symmetric_eigenvalue() > 0.0)) throw DomainError("entropy chart: rho A^-1 must be SPD");
    return c;
}

void require_domain(const PrimitiveStateMD& s) {
    const auto h = multid::hyperbolicity(s);
    if (!h.in_domain) throw DomainError("entropy: state outside the hyperbolicity domain");
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    return s;
}

/// Coordinate basis direction k in the chart.
Direction basis(int d, int k) {
    Direction e;
    e.Q = SquareMatrix(d);
    e.Z = SquareMatrix(d);
    if (k == 0) {
        e.r = 1.0;
        return e;
    }
    for (int i = 0; i < d; ++i)
        if (k == chart_mom_index(d, i)) {
            e.n[static_cast<std::size_t>(i)] = 1.0;
            return e;
        }
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a)
            if (k == chart_P_index(d, i, a)) {
                e.Q(i, a) = 1.0;
                return e;
            }
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            if (k == chart_Y_index(d, a, b)) {
                e.Z(a, b) = 1.0;
                e.Z(b, a) = 1.0;
                return e;
            }
    throw ConfigError("entropy chart: basis index out of range");
}

}  // namespace

int chart_size(int dim) { return 1 + dim + dim * dim + dim * (dim + 1) / 2; }
int chart_mom_index(int, int i) { return 1 + i; }
int chart_P_index(int dim, int i, int a) { return 1 + dim + i * dim + a; }

int chart_Y_index(int dim, int a, int b) {
    if (a > b) std::swap(a, b);
    // Upper triangle, row by row.
    const int before = a * dim - a * (a - 1) / 2;
    return 1 + dim + dim * dim + before + (b - a);
}

ChartVector to_chart(const PrimitiveStateMD& s) {
    require_domain(s);
    const int d = s.dim();
    ChartVector V(chart_size(d));
    V(0) = s.rho;
    for (int i = 0; i < d; ++i) V(chart_mom_index(d, i)) = s.rho * s.u[static_cast<std::size_t>(i)];
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) V(chart_P_index(d, i, a)) = s.rho * s.F(i, a);
    const SquareMatrix Y = (s.rho * s.A.inverse()).symmetrized();
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) V(chart_Y_index(d, a, b)) = Y(a, b);
    return V;
}

ChartVector to_chart(const ConservedVector& U) { return to_chart(multid::conserved_to_primitive(U)); }

PrimitiveStateMD from_chart(const ChartVector& V, int dim) {
    const ChartState c = unpack(V, dim);
    PrimitiveStateMD s;
    s.rho = c.rho;
    for (int i = 0; i < dim; ++i) s.u[static_cast<std::size_t>(i)] = c.m[static_cast<std::size_t>(i)] / c.rho;
    s.F = c.P * (1.0 / c.rho);
    s.A = (c.rho * c.Y.inverse()).symmetrized();
    return s;
}

double eta(const PrimitiveStateMD& s, const Eos& eos, double G) {
    require_domain(s);
    const int d = s.dim();
    const double kinetic = 0.5 * s.rho * dot(s.u, s.u, d);
    const double stored = s.rho * eos.e0(1.0 / s.rho);
    const double elastic = 0.5 * s.rho * G * congruence(s.F, s.A).trace();
    const double volumetric = G * s.rho * std::log(s.rho);
    return kinetic + stored + elastic + volumetric;
}

double eta(const ConservedVector& U, const Eos& eos, double G) {
    return eta(multid::conserved_to_primitive(U), eos, G);
}

double eta_chart(const ChartVector& V, int dim, const Eos& eos, double G) {
    const ChartState c = unpack(V, dim);
    const double kinetic = 0.5 * dot(c.m, c.m, dim) / c.rho;
    const double stored = c.rho * eos.e0(1.0 / c.rho);
    const double elastic = 0.5 * G * congruence(c.P, c.Y.inverse()).trace();
    const double volumetric = G * c.rho * std::log(c.rho);
    return kinetic + stored + elastic + volumetric;
}

ChartVector grad_eta(const ChartVector& V, int dim, const Eos& eos, double G) {
    const ChartState c = unpack(V, dim);
    const int d = dim;
    const double rho = c.rho;
    const double nu = 1.0 / rho;
    std::array<double, 3> u{};
    for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = c.m[static_cast<std::size_t>(i)] / rho;
    const SquareMatrix F = c.P * nu;
    const SquareMatrix A = (rho * c.Y.inverse()).symmetrized();

    ChartVector g(chart_size(d));
    g(0) = -0.5 * dot(u, u, d) + eos.e0(nu) - nu * eos.de0(nu) + G * (std::log(rho) + 1.0);
    for (int i = 0; i < d; ++i) g(chart_mom_index(d, i)) = u[static_cast<std::size_t>(i)];

    const SquareMatrix dP = G * (F * A);
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) g(chart_P_index(d, i, a)) = dP(i, a);

    const SquareMatrix dY = -0.5 * G * congruence(A, F.transpose() * F);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) g(chart_Y_index(d, a, b)) = (a == b ? 1.0 : 2.0) * dY(a, b);
    return g;
}

ChartMatrix hess_eta(const ChartVector& V, int dim, const Eos& eos, double G) {
    const ChartState c = unpack(V, dim);
    const int d = dim;
    const double rho = c.rho;
    const double nu = 1.0 / rho;
    std::array<double, 3> u{};
    for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = c.m[static_cast<std::size_t>(i)] / rho;
    const SquareMatrix Yi = c.Y.inverse();
    const SquareMatrix Pt = c.P.transpose();
    const double m2 = dot(c.m, c.m, d);
    const double rr = m2 / (rho * rho * rho) + eos.d2e0(nu) * nu * nu * nu + G / rho;

    auto form = [&](const Direction& e1, const Direction& e2) {
        double s = rr * e1.r * e2.r;
        s += -(e1.r * dot(u, e2.n, d) + e2.r * dot(u, e1.n, d)) / rho + dot(e1.n, e2.n, d) / rho;
        s += G * (e1.Q * Yi * e2.Q.transpose()).trace();
        s += -G * (e1.Q * Yi * e2.Z * Yi * Pt).trace();
        s += -G * (e2.Q * Yi * e1.Z * Yi * Pt).trace();
        s += G * (c.P * Yi * e1.Z * Yi * e2.Z * Yi * Pt).trace();
        return s;
    };

    const int n = chart_size(d);
    std::vector<Direction> basis_dirs;
    basis_dirs.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) basis_dirs.push_back(basis(d, k));

    ChartMatrix H(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            H(k, l) = form(basis_dirs[static_cast<std::size_t>(k)], basis_dirs[static_cast<std::size_t>(l)]);
            H(l, k) = H(k, l);
        }
    return H;
}

EntropyEval evaluate(const ChartVector& V, int dim, const Eos& eos, double G) {
    return EntropyEval{eta_chart(V, dim, eos, G), grad_eta(V, dim, eos, G), hess_eta(V, dim, eos, G)};
}

EntropyEval evaluate(const ConservedVector& U, const Eos& eos, double G) {
    return evaluate(to_chart(U), U.dim(), eos, G);
}

std::array<double, 3> entropy_flux(const PrimitiveStateMD& s, const Eos& eos, double G) {
    const int d = s.dim();
    const double e = eta(s, eos, G);
    const double p = eos.pressure(s.rho);
    const SquareMatrix tau = neo_hookean_stress(s.rho, s.F, s.A, G);
    std::array<double, 3> q{};
    for (int a = 0; a < d; ++a) {
        double work = 0.0;
        for (int i = 0; i < d; ++i) work += tau(i, a) * s.u[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(a)] = s.u[static_cast<std::size_t>(a)] * (e + p) - work;
    }
    return q;
}

double entropy_source(const PrimitiveStateMD& s, double G) {
    return 0.5 * s.rho * G * (s.dim() - congruence(s.F, s.A).trace());
}

}  // namespace maxlab::entropy
