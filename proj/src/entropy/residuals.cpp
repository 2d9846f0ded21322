#include "maxlab/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace maxlab::entropy {

namespace {

std::vector<PrimitiveStateMD> primitives(const Grid2D& g) {
    std::vector<PrimitiveStateMD> out;
    out.reserve(g.cells.size());
    for (const auto& U : g.cells) out.push_back(multid::conserved_to_primitive(U));
    return out;
}

void require_triple(const Grid2D& prev, const Grid2D& cur, const Grid2D& next, double dt) {
    if (!prev.same_shape(cur) || !next.same_shape(cur)) throw ConfigError("residual: snapshot grids differ in shape");
    if (!(dt > 0.0)) throw ConfigError("residual: dt must be positive");
}

int wrap(int i, int n) { return ((i % n) + n) % n; }

/// (grad u)_ij = d_j u_i by centred differences.
SquareMatrix velocity_gradient(const std::vector<PrimitiveStateMD>& s, const Grid2D& g, int i, int j) {
    const auto at = [&](int ii, int jj) -> const PrimitiveStateMD& {
        return s[static_cast<std::size_t>(wrap(ii, g.nx) + g.nx * wrap(jj, g.ny))];
    };
    SquareMatrix L(2);
    for (int c = 0; c < 2; ++c) {
        const auto k = static_cast<std::size_t>(c);
        L(c, 0) = (at(i + 1, j).u[k] - at(i - 1, j).u[k]) / (2.0 * g.dx());
        L(c, 1) = (at(i, j + 1).u[k] - at(i, j - 1).u[k]) / (2.0 * g.dy());
    }
    return L;
}

}  // namespace

double entropy_balance_residual(const Grid2D& prev, const Grid2D& cur, const Grid2D& next,
                                double dt, const Eos& eos, double G, double xi) {
    require_triple(prev, cur, next, dt);
    const auto sp = primitives(prev);
    const auto sc = primitives(cur);
    const auto sn = primitives(next);

    std::vector<std::array<double, 3>> q(sc.size());
    for (std::size_t k = 0; k < sc.size(); ++k) q[k] = entropy_flux(sc[k], eos, G);

    const int nx = cur.nx;
    const int ny = cur.ny;
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(wrap(i, nx) + nx * wrap(j, ny)); };

    double worst = 0.0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = idx(i, j);
            const double dt_eta = (eta(sn[k], eos, G) - eta(sp[k], eos, G)) / (2.0 * dt);
            const double div_q = (q[idx(i + 1, j)][0] - q[idx(i - 1, j)][0]) / (2.0 * cur.dx()) +
                                 (q[idx(i, j + 1)][1] - q[idx(i, j - 1)][1]) / (2.0 * cur.dy());
            const double r = dt_eta + div_q - xi * entropy_source(sc[k], G);
            worst = std::max(worst, std::abs(r));
        }
    return worst;
}

std::vector<double> entropy_balance_series(const std::vector<Grid2D>& snapshots, double dt,
                                           const Eos& eos, double G, double xi) {
    std::vector<double> out;
    for (std::size_t k = 1; k + 1 < snapshots.size(); ++k)
        out.push_back(entropy_balance_residual(snapshots[k - 1], snapshots[k], snapshots[k + 1], dt, eos, G, xi));
    return out;
}

ConstitutiveResidual constitutive_residual(const Grid2D& prev, const Grid2D& cur, const Grid2D& next,
                                           double dt, const MaterialParams& params) {
    require_triple(prev, cur, next, dt);
    const double G = params.G;
    const double xi = params.xi;
    const auto sp = primitives(prev);
    const auto sc = primitives(cur);
    const auto sn = primitives(next);

    auto stress = [&](const PrimitiveStateMD& s) { return neo_hookean_stress(s.rho, s.F, s.A, G); };
    std::vector<SquareMatrix> tau(sc.size());
    for (std::size_t k = 0; k < sc.size(); ++k) tau[k] = stress(sc[k]);

    const int nx = cur.nx;
    const int ny = cur.ny;
    auto idx = [&](int i, int j) { return static_cast<std::size_t>(wrap(i, nx) + nx * wrap(j, ny)); };

    ConstitutiveResidual out;
    out.rescaled = !(xi > 0.0);
    out.literal_components = SquareMatrix(2);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = idx(i, j);
            const PrimitiveStateMD& s = sc[k];
            const SquareMatrix& t = tau[k];
            const SquareMatrix dtau = (stress(sn[k]) - stress(sp[k])) * (1.0 / (2.0 * dt));
            const SquareMatrix dxtau = (tau[idx(i + 1, j)] - tau[idx(i - 1, j)]) * (1.0 / (2.0 * cur.dx()));
            const SquareMatrix dytau = (tau[idx(i, j + 1)] - tau[idx(i, j - 1)]) * (1.0 / (2.0 * cur.dy()));
            const SquareMatrix L = velocity_gradient(sc, cur, i, j);
            const SquareMatrix D = L.symmetrized();
            const double div_u = L.trace();

            const SquareMatrix uc = dtau + s.u[0] * dxtau + s.u[1] * dytau - L * t - t * L.transpose();
            SquareMatrix consistent(2);
            SquareMatrix literal(2);
            if (out.rescaled) {
                consistent = uc + div_u * t + xi * t - (2.0 * s.rho * G) * D;
                literal = uc + xi * t - (2.0 * G) * D;
            } else {
                const double lambda = params.lambda();
                const double mu_dot = params.mu_dot();
                consistent = lambda * (uc + div_u * t) + t - (2.0 * s.rho * mu_dot) * D;
                literal = lambda * uc + t - (2.0 * mu_dot) * D;
            }
            out.consistent = std::max(out.consistent, consistent.max_abs());
            out.literal = std::max(out.literal, literal.max_abs());
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    out.literal_components(a, b) = std::max(out.literal_components(a, b), std::abs(literal(a, b)));
        }
    return out;
}

std::vector<ConstitutiveResidual> constitutive_series(const std::vector<Grid2D>& snapshots, double dt,
                                                      const MaterialParams& params) {
    std::vector<ConstitutiveResidual> out;
    for (std::size_t k = 1; k + 1 < snapshots.size(); ++k)
        out.push_back(constitutive_residual(snapshots[k - 1], snapshots[k], snapshots[k + 1], dt, params));
    return out;
}

}  // namespace maxlab::entropy
