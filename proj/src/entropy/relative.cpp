#include "maxlab/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxlab::entropy {

namespace {

SquareMatrix rotation(double theta) {
    return SquareMatrix::from_rows(2, {std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta)});
}

double norm2(const ConservedVector& a, const ConservedVector& b) {
    double s = 0.0;
    for (int k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

}  // namespace

double relative_entropy_density(const ChartVector& V1, const ChartVector& V2, int dim,
                                const Eos& eos, double G) {
    const double e1 = eta_chart(V1, dim, eos, G);
    const double e2 = eta_chart(V2, dim, eos, G);
    return e1 - e2 - grad_eta(V2, dim, eos, G).dot(V1 - V2);
}

RelEntropyReport relative_entropy(const Grid2D& U1, const Grid2D& U2, const Eos& eos, double G) {
    if (!U1.same_shape(U2)) throw ConfigError("relative_entropy: grids differ in shape");
    const double cell = U1.dx() * U1.dy();
    const std::size_t n = U1.cells.size();

    std::vector<double> density(n);
    std::vector<double> dist2(n);
    std::vector<double> noise(n);  // rounding floor of the density, ~ eps |eta|
    double max_dist2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const int d = U1.cells[k].dim();
        if (U1.cells[k] == U2.cells[k]) {
            density[k] = 0.0;
            dist2[k] = 0.0;
            continue;
        }
        const ChartVector V1 = to_chart(U1.cells[k]);
        const ChartVector V2 = to_chart(U2.cells[k]);
        const double e2 = eta_chart(V2, d, eos, G);
        density[k] = eta_chart(V1, d, eos, G) - e2 - grad_eta(V2, d, eos, G).dot(V1 - V2);
        noise[k] = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e2));
        dist2[k] = norm2(U1.cells[k], U2.cells[k]);
        max_dist2 = std::max(max_dist2, dist2[k]);
    }

    RelEntropyReport r;
    double re_sum = 0.0;
    double l2_sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double min_cell = std::numeric_limits<double>::infinity();
    // Ratios in cells far below the largest difference, or whose squared
    // difference is near the rounding floor of eta(U1) - eta(U2), are
    // dominated by cancellation; they are left out of the band.
    const double floor = 1e-6 * max_dist2;
    for (std::size_t k = 0; k < n; ++k) {
        re_sum += density[k];
        l2_sum += dist2[k];
        min_cell = std::min(min_cell, density[k]);
        if (dist2[k] > floor && dist2[k] > noise[k]) {
            const double ratio = density[k] / dist2[k];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    r.rel_entropy = re_sum * cell;
    r.l2_diff = std::sqrt(l2_sum * cell);
    r.a_lower = std::isfinite(lo) ? lo : 0.0;
    r.a_upper = hi;
    r.min_cell = n > 0 ? min_cell : 0.0;
    return r;
}

ChartVector taylor_remainder_Z(const ChartVector& V1, const ChartVector& V2,
                               const std::function<ChartVector(const ChartVector&)>& grad,
                               const std::function<ChartMatrix(const ChartVector&)>& hess) {
    return grad(V1) - grad(V2) - hess(V2) * (V1 - V2);
}

ChartVector taylor_remainder_Z(const ChartVector& V1, const ChartVector& V2, int dim,
                               const Eos& eos, double G) {
    return taylor_remainder_Z(
        V1, V2, [&](const ChartVector& V) { return grad_eta(V, dim, eos, G); },
        [&](const ChartVector& V) { return hess_eta(V, dim, eos, G); });
}

PrimitiveStateMD sample_state(std::mt19937_64& rng, const StateBox& box, int dim) {
    if (dim != 2) throw ConfigError("sample_state: only d = 2 is supported");
    constexpr double kPi = 3.14159265358979323846;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    PrimitiveStateMD s;
    s.rho = in(box.rho_min, box.rho_max);
    s.u[0] = in(-box.u_max, box.u_max);
    s.u[1] = in(-box.u_max, box.u_max);
    const double t1 = in(0.0, 2.0 * kPi);
    const double t2 = in(0.0, 2.0 * kPi);
    const SquareMatrix S = SquareMatrix::diagonal({in(box.s_min, box.s_max), in(box.s_min, box.s_max)});
    s.F = rotation(t1) * S * rotation(t2);
    const double t = in(0.0, 2.0 * kPi);
    const SquareMatrix D = SquareMatrix::diagonal({in(box.a_min, box.a_max), in(box.a_min, box.a_max)});
    s.A = congruence(rotation(t), D);
    return s;
}

SourceBoundsReport source_bounds_check(const StateBox& box, int samples, std::uint64_t seed) {
    constexpr int d = 2;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = ConservedVector::size_for(d);
    SourceBoundsReport rep;
    rep.box = box;
    rep.samples = samples;
    rep.seed = seed;
    rep.lipschitz.assign(static_cast<std::size_t>(n), 0.0);
    rep.remainder.assign(static_cast<std::size_t>(n), 0.0);

    auto symmetric_direction = [&]() {
        ConservedVector w(d);
        for (int k = 0; k < n; ++k) w[k] = gauss(rng);
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) w.rhoA(b, a) = w.rhoA(a, b);
        double norm = 0.0;
        for (int k = 0; k < n; ++k) norm += w[k] * w[k];
        norm = std::sqrt(norm);
        for (int k = 0; k < n; ++k) w[k] /= norm;
        return w;
    };
    auto shifted = [&](const ConservedVector& U, const ConservedVector& w, double s) {
        ConservedVector V = U;
        for (int k = 0; k < n; ++k) V[k] += s * w[k];
        return V;
    };

    for (int sample = 0; sample < samples; ++sample) {
        const ConservedVector U1 = multid::primitive_to_conserved(sample_state(rng, box, d));
        const ConservedVector w = symmetric_direction();
        double u_norm = 0.0;
        for (int k = 0; k < n; ++k) u_norm += U1[k] * U1[k];
        u_norm = std::sqrt(u_norm);
        // Log-uniform relative step in [1e-3, 1e-1].
        const double r = u_norm * std::pow(10.0, -3.0 + 2.0 * unit(rng));
        const ConservedVector U2 = shifted(U1, w, r);
        if (!multid::hyperbolicity(multid::conserved_to_primitive(U2)).in_domain) continue;

        const ConservedVector pi1 = multid::source_pi(U1);
        const ConservedVector pi2 = multid::source_pi(U2);
        const double h = 1e-5 * u_norm;
        const ConservedVector pp = multid::source_pi(shifted(U1, w, h));
        const ConservedVector pm = multid::source_pi(shifted(U1, w, -h));
        for (int m = 0; m < n; ++m) {
            const double dpi = pi2[m] - pi1[m];
            const double linear = r * (pp[m] - pm[m]) / (2.0 * h);
            auto& L = rep.lipschitz[static_cast<std::size_t>(m)];
            auto& R = rep.remainder[static_cast<std::size_t>(m)];
            L = std::max(L, std::abs(dpi) / r);
            R = std::max(R, std::abs(dpi - linear) / (r * r));
        }
    }
    rep.lipschitz_max = *std::max_element(rep.lipschitz.begin(), rep.lipschitz.end());
    rep.remainder_max = *std::max_element(rep.remainder.begin(), rep.remainder.end());
    return rep;
}

}  // namespace maxlab::entropy
