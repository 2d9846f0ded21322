#include "maxlab/errors.hpp"
#include "maxlab/shear1d.hpp"

#include <cmath>
#include <sstream>

namespace maxlab::shear1d {

void ShearState1D::validate() const {
    if (u.empty()) throw ConfigError("ShearState1D: empty grid");
    if (u.size() != tau.size()) throw ConfigError("ShearState1D: u and tau sizes differ");
    if (!(y_max > y_min) || !std::isfinite(y_min) || !std::isfinite(y_max)) {
        throw ConfigError("ShearState1D: need finite y_min < y_max");
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || !std::isfinite(tau[i])) {
            throw ConfigError("ShearState1D: non-finite field value");
        }
    }
}

ShearState1D ShearState1D::zeros(double y_min, double y_max, std::size_t n) {
    ShearState1D s;
    s.y_min = y_min;
    s.y_max = y_max;
    s.u.assign(n, 0.0);
    s.tau.assign(n, 0.0);
    return s;
}

ShearState1D ShearState1D::sampled(double y_min, double y_max, std::size_t n,
                                   const std::function<double(double)>& u0,
                                   const std::function<double(double)>& tau0) {
    ShearState1D s = zeros(y_min, y_max, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = s.cell_center(i);
        s.u[i] = u0(y);
        s.tau[i] = tau0(y);
    }
    return s;
}

RiemannFields to_riemann(const ShearState1D& state, double G) {
    const double c = std::sqrt(G);
    const std::size_t n = state.size();
    RiemannFields w{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        w.w_plus[i] = state.tau[i] + c * state.u[i];
        w.w_minus[i] = state.tau[i] - c * state.u[i];
    }
    return w;
}

void from_riemann(const RiemannFields& w, double G, std::vector<double>& u, std::vector<double>& tau) {
    const double c = std::sqrt(G);
    const std::size_t n = w.w_plus.size();
    u.resize(n);
    tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        tau[i] = 0.5 * (w.w_plus[i] + w.w_minus[i]);
        u[i] = (w.w_plus[i] - w.w_minus[i]) / (2.0 * c);
    }
}

namespace {

// Boundary relation in Riemann variables: a w+ + b w- = g.
struct RiemannRelation {
    double a;
    double b;
};

RiemannRelation riemann_relation(const BoundarySpec& bc, double G) {
    const double c = std::sqrt(G);
    return {0.5 * (bc.c_u / c + bc.c_tau), 0.5 * (bc.c_tau - bc.c_u / c)};
}

BoundaryTrace make_trace(double w_plus, double w_minus, double w_out, double w_in, double G) {
    const double c = std::sqrt(G);
    return {w_out, w_in, (w_plus - w_minus) / (2.0 * c), 0.5 * (w_plus + w_minus)};
}

}  // namespace

AdvectTraces advect_step(RiemannFields& w, double G, double dt, double dy,
                         const BoundarySpec& left, const BoundarySpec& right,
                         double g_left, double g_right) {
    const std::size_t n = w.w_plus.size();
    const double nu = std::sqrt(G) * dt / dy;
    if (nu > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "advect_step: CFL number " << nu << " exceeds 1";
        throw StabilityError(os.str());
    }
    auto& wp = w.w_plus;
    auto& wm = w.w_minus;
    AdvectTraces traces;

    double wp_ghost = 0.0;  // w+ entering through y_max
    double wm_ghost = 0.0;  // w- entering through y_min
    if (left.kind == BoundaryKind::periodic) {
        wm_ghost = wm[n - 1];
        wp_ghost = wp[0];
    } else {
        const RiemannRelation lr = riemann_relation(left, G);
        const RiemannRelation rr = riemann_relation(right, G);
        const double lscale = std::abs(left.c_u) / std::sqrt(G) + std::abs(left.c_tau);
        const double rscale = std::abs(right.c_u) / std::sqrt(G) + std::abs(right.c_tau);
        if (std::abs(lr.b) <= 1e-12 * lscale) {
            throw SingularBoundaryError("left boundary relation does not determine the incoming w-");
        }
        if (std::abs(rr.a) <= 1e-12 * rscale) {
            throw SingularBoundaryError("right boundary relation does not determine the incoming w+");
        }
        wm_ghost = (g_left - lr.a * wp[0]) / lr.b;
        wp_ghost = (g_right - rr.b * wm[n - 1]) / rr.a;
        traces.left = make_trace(wp[0], wm_ghost, wp[0], wm_ghost, G);
        traces.right = make_trace(wp_ghost, wm[n - 1], wm[n - 1], wp_ghost, G);
    }

    if (std::abs(nu - 1.0) <= 1e-12) {
        // Exact shift.
        for (std::size_t i = 0; i + 1 < n; ++i) wp[i] = wp[i + 1];
        wp[n - 1] = wp_ghost;
        for (std::size_t i = n - 1; i > 0; --i) wm[i] = wm[i - 1];
        wm[0] = wm_ghost;
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) wp[i] += nu * (wp[i + 1] - wp[i]);
        wp[n - 1] += nu * (wp_ghost - wp[n - 1]);
        for (std::size_t i = n - 1; i > 0; --i) wm[i] -= nu * (wm[i] - wm[i - 1]);
        wm[0] -= nu * (wm[0] - wm_ghost);
    }
    return traces;
}

void source_step(RiemannFields& w, double xi, double dt) {
    if (xi == 0.0) return;
    const double decay_minus_one = std::expm1(-xi * dt);
    for (std::size_t i = 0; i < w.w_plus.size(); ++i) {
        const double delta = 0.5 * (w.w_plus[i] + w.w_minus[i]) * decay_minus_one;
        w.w_plus[i] += delta;
        w.w_minus[i] += delta;
    }
}

}  // namespace maxlab::shear1d
