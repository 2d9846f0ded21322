#include "maxlab/multid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxlab::multid {

Grid2D::Grid2D(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), cells(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_),
                                                 ConservedVector(2)) {
    if (nx < 3 || ny < 3) throw ConfigError("Grid2D needs at least 3 cells per direction");
    if (!(lx > 0.0 && ly > 0.0)) throw ConfigError("Grid2D needs positive box lengths");
}

const ConservedVector& Grid2D::wrapped(int i, int j) const {
    i %= nx;
    j %= ny;
    if (i < 0) i += nx;
    if (j < 0) j += ny;
    return at(i, j);
}

HyperbolicityReport hyperbolicity(const Grid2D& grid) {
    HyperbolicityReport r;
    r.min_rho = std::numeric_limits<double>::infinity();
    r.min_detF = std::numeric_limits<double>::infinity();
    r.min_eig_A = std::numeric_limits<double>::infinity();
    for (const auto& U : grid.cells) {
        if (!(U.rho() > 0.0)) {
            r.min_rho = std::min(r.min_rho, U.rho());
            continue;
        }
        const HyperbolicityReport c = hyperbolicity(conserved_to_primitive(U));
        r.min_rho = std::min(r.min_rho, c.min_rho);
        r.min_detF = std::min(r.min_detF, c.min_detF);
        r.min_eig_A = std::min(r.min_eig_A, c.min_eig_A);
    }
    r.in_domain = r.min_rho > 0.0 && r.min_detF > 0.0 && r.min_eig_A > 0.0;
    return r;
}

double max_wavespeed(const Grid2D& grid, const Eos& eos, double G) {
    double s = 0.0;
    for (const auto& U : grid.cells) s = std::max(s, max_wavespeed(U, eos, G));
    return s;
}

std::vector<double> conserved_totals(const Grid2D& grid) {
    const int n = ConservedVector::size_for(2);
    std::vector<double> totals(static_cast<std::size_t>(n), 0.0);
    // Row partial sums first: a fixed association order.
    for (int j = 0; j < grid.ny; ++j) {
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < grid.nx; ++i)
            for (int k = 0; k < n; ++k) row[static_cast<std::size_t>(k)] += grid.at(i, j)[k];
        for (int k = 0; k < n; ++k) totals[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
    }
    const double cell = grid.dx() * grid.dy();
    for (double& t : totals) t *= cell;
    return totals;
}

std::array<double, 3> piola_residual(const Grid2D& grid) {
    std::array<double, 3> res{};
    const double hx = 2.0 * grid.dx();
    const double hy = 2.0 * grid.dy();
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const auto& e = grid.wrapped(i + 1, j);
            const auto& w = grid.wrapped(i - 1, j);
            const auto& n = grid.wrapped(i, j + 1);
            const auto& s = grid.wrapped(i, j - 1);
            for (int a = 0; a < 2; ++a) {
                const double div = (e.rhoF(0, a) - w.rhoF(0, a)) / hx + (n.rhoF(1, a) - s.rhoF(1, a)) / hy;
                res[static_cast<std::size_t>(a)] = std::max(res[static_cast<std::size_t>(a)], std::abs(div));
            }
        }
    }
    return res;
}

double stable_dt(const Grid2D& grid, const Eos& eos, double G) {
    return kCflSafety * std::min(grid.dx(), grid.dy()) / max_wavespeed(grid, eos, G);
}

}  // namespace maxlab::multid

namespace maxlab::multid {

std::string_view to_string(InitialData kind) {
    switch (kind) {
        case InitialData::deformation_map: return "deformation-map";
        case InitialData::uniform_deformation: return "uniform-deformation";
    }
    return "unknown";
}

InitialData initial_data_from_string(std::string_view name) {
    if (name == "deformation-map") return InitialData::deformation_map;
    if (name == "uniform-deformation") return InitialData::uniform_deformation;
    throw ConfigError("unknown initial data '" + std::string(name) + "'");
}

Grid2D make_initial_grid(InitialData kind, int nx, int ny, double amplitude) {
    constexpr double kTwoPi = 6.28318530717958647692;
    Grid2D g(nx, ny, 1.0, 1.0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double x = g.cell_x(i);
            const double y = g.cell_y(j);
            const double ss = std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
            const double cc = std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
            PrimitiveStateMD s = PrimitiveStateMD::rest(2);
            if (kind == InitialData::uniform_deformation) {
                s.rho = 1.0 + amplitude * ss;
                g.at(i, j) = primitive_to_conserved(s);
                continue;
            }
            // k^2 a with k = 2 pi, a = amp / (8 pi^2).
            const double c = 0.5 * amplitude;
            const SquareMatrix H = SquareMatrix::from_rows(2, {1.0 + c * ss, -c * cc, -c * cc, 1.0 + c * ss});
            const double det = H.determinant();
            const SquareMatrix adj = SquareMatrix::from_rows(2, {H(1, 1), -H(0, 1), -H(1, 0), H(0, 0)});
            ConservedVector U(2);
            U.rho() = det;
            for (int r = 0; r < 2; ++r)
                for (int a = 0; a < 2; ++a) U.rhoF(r, a) = adj(r, a);
            const SquareMatrix A = congruence(H, SquareMatrix::identity(2));
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) U.rhoA(a, b) = det * A(a, b);
            g.at(i, j) = U;
        }
    return g;
}

}  // namespace maxlab::multid
