#include "maxlab/multid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maxlab::multid {

namespace {

// Rusanov face flux between left/lower state L and right/upper state R.
// The rho F slots use the grid-wide speed s_grid: a constant coefficient
// commutes with the centred divergence, so div(rho F^T) = 0 is kept discretely.
inline ConservedVector rusanov_face(const ConservedVector& uL, const ConservedVector& uR, const ConservedVector& fL,
                                    const ConservedVector& fR, double sL, double sR, double s_grid) {
    const double s = std::max(sL, sR);
    const int d = uL.dim();
    const int f_begin = uL.rhoF_index(0, 0);
    const int f_end = f_begin + d * d;
    ConservedVector face(d);
    for (int k = 0; k < uL.size(); ++k) {
        const double sk = (k >= f_begin && k < f_end) ? s_grid : s;
        face[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * sk * (uR[k] - uL[k]);
    }
    return face;
}

inline ConservedVector transported(const ConservedVector& U, const ConservedVector& west, const ConservedVector& east,
                                   const ConservedVector& south, const ConservedVector& north, double rx, double ry) {
    ConservedVector out(U.dim());
    for (int k = 0; k < U.size(); ++k) out[k] = U[k] - rx * (east[k] - west[k]) - ry * (north[k] - south[k]);
    return out;
}

}  // namespace

void fv_step_serial(const Grid2D& in, Grid2D& out, double dt, const Eos& eos, double G, double xi) {
    if (!out.same_shape(in)) out = in;
    const double rx = dt / in.dx();
    const double ry = dt / in.dy();
    const double sg = max_wavespeed(in, eos, G);
    for (int j = 0; j < in.ny; ++j) {
        for (int i = 0; i < in.nx; ++i) {
            const ConservedVector& c = in.at(i, j);
            const ConservedVector& w = in.wrapped(i - 1, j);
            const ConservedVector& e = in.wrapped(i + 1, j);
            const ConservedVector& s = in.wrapped(i, j - 1);
            const ConservedVector& n = in.wrapped(i, j + 1);
            const double sc = max_wavespeed(c, eos, G);
            const ConservedVector fw = rusanov_face(w, c, flux(w, 0, eos, G), flux(c, 0, eos, G),
                                                    max_wavespeed(w, eos, G), sc, sg);
            const ConservedVector fe = rusanov_face(c, e, flux(c, 0, eos, G), flux(e, 0, eos, G), sc,
                                                    max_wavespeed(e, eos, G), sg);
            const ConservedVector fs = rusanov_face(s, c, flux(s, 1, eos, G), flux(c, 1, eos, G),
                                                    max_wavespeed(s, eos, G), sc, sg);
            const ConservedVector fn = rusanov_face(c, n, flux(c, 1, eos, G), flux(n, 1, eos, G), sc,
                                                    max_wavespeed(n, eos, G), sg);
            ConservedVector next = transported(c, fw, fe, fs, fn, rx, ry);
            relax_conformation(next, xi, dt);
            out.at(i, j) = next;
        }
    }
}

void fv_step_parallel(const Grid2D& in, Grid2D& out, double dt, const Eos& eos, double G, double xi) {
    if (!out.same_shape(in)) out = in;
    const auto ncell = static_cast<long>(in.cells.size());
    std::vector<ConservedVector> fx(in.cells.size());
    std::vector<ConservedVector> fy(in.cells.size());
    std::vector<double> speed(in.cells.size());
    const double rx = dt / in.dx();
    const double ry = dt / in.dy();
    const int nx = in.nx;
    const int ny = in.ny;
    int failed = 0;
    double sg = 0.0;

#pragma omp parallel
    {
#pragma omp for schedule(static) reduction(max : sg)
        for (long c = 0; c < ncell; ++c) {
            const auto k = static_cast<std::size_t>(c);
            fx[k] = flux(in.cells[k], 0, eos, G);
            fy[k] = flux(in.cells[k], 1, eos, G);
            speed[k] = max_wavespeed(in.cells[k], eos, G);
            sg = std::max(sg, speed[k]);
        }
#pragma omp for schedule(static)
        for (long c = 0; c < ncell; ++c) {
            const int i = static_cast<int>(c % nx);
            const int j = static_cast<int>(c / nx);
            const auto k = static_cast<std::size_t>(c);
            const auto kw = static_cast<std::size_t>((i + nx - 1) % nx + nx * j);
            const auto ke = static_cast<std::size_t>((i + 1) % nx + nx * j);
            const auto ks = static_cast<std::size_t>(i + nx * ((j + ny - 1) % ny));
            const auto kn = static_cast<std::size_t>(i + nx * ((j + 1) % ny));
            const auto& U = in.cells;
            const ConservedVector fw = rusanov_face(U[kw], U[k], fx[kw], fx[k], speed[kw], speed[k], sg);
            const ConservedVector fe = rusanov_face(U[k], U[ke], fx[k], fx[ke], speed[k], speed[ke], sg);
            const ConservedVector fs = rusanov_face(U[ks], U[k], fy[ks], fy[k], speed[ks], speed[k], sg);
            const ConservedVector fn = rusanov_face(U[k], U[kn], fy[k], fy[kn], speed[k], speed[kn], sg);
            ConservedVector next = transported(U[k], fw, fe, fs, fn, rx, ry);
            try {
                relax_conformation(next, xi, dt);
            } catch (const DomainError&) {
                // Exceptions must not cross the parallel region; reported below.
#pragma omp atomic write
                failed = 1;
            }
            out.cells[k] = next;
        }
    }
    if (failed) throw DomainError("fv_step_parallel: singular deformation gradient during relaxation");
}

Grid2D fv_step(const Grid2D& in, double dt, const Eos& eos, double G, double xi, Execution exec) {
    const double smax = max_wavespeed(in, eos, G);
    if (!std::isfinite(smax)) throw NumericalError("fv_step: wave-speed bound is not finite");
    const double limit = kCflSafety * std::min(in.dx(), in.dy()) / smax;
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "fv_step: dt = " << dt << " exceeds the CFL limit " << limit;
        throw StabilityError(os.str());
    }
    Grid2D out = in;
    if (exec == Execution::serial) {
        fv_step_serial(in, out, dt, eos, G, xi);
    } else {
        fv_step_parallel(in, out, dt, eos, G, xi);
    }
    double check = 0.0;
    for (const auto& U : out.cells)
        for (int k = 0; k < U.size(); ++k) check += U[k];
    if (!std::isfinite(check)) throw NumericalError("fv_step: non-finite state after step");
    const HyperbolicityReport r = hyperbolicity(out);
    if (!r.in_domain) {
        std::ostringstream os;
        os << "fv_step: left the hyperbolicity domain (min rho " << r.min_rho << ", min det F " << r.min_detF
           << ", min eig A " << r.min_eig_A << ")";
        throw HyperbolicityLoss(os.str(), r);
    }
    return out;
}

}  // namespace maxlab::multid
