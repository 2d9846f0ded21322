#include "maxlab/entropy.hpp"
#include "maxlab/errors.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace maxlab;
using namespace maxlab::multid;
namespace en = maxlab::entropy;

namespace {

constexpr double kTwoPi = 6.283185307179586;
const Eos kEos{EosKind::isothermal, 1.0};

en::ChartVector random_direction(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    en::ChartVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v[k] = nd(rng);
    return v / v.norm();
}

Grid2D uniform_grid(const PrimitiveStateMD& s, int n) {
    Grid2D g(n, n);
    for (auto& U : g.cells) U = primitive_to_conserved(s);
    return g;
}

}  // namespace

TEST_CASE("eta examples") {
    const auto rest = PrimitiveStateMD::rest(2);
    CHECK(en::eta(rest, kEos, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    auto s = rest;
    s.rho = 1.7;
    s.u = {0.3, -0.2, 0.0};
    auto s2 = s;
    s2.u = {0.6, -0.4, 0.0};
    const double kinetic = 0.5 * 1.7 * (0.09 + 0.04);
    CHECK(en::eta(s2, kEos, 1.0) - en::eta(s, kEos, 1.0) == doctest::Approx(3.0 * kinetic).epsilon(1e-13));

    std::mt19937_64 rng(4);
    for (int k = 0; k < 50; ++k) {
        const auto r = en::sample_state(rng, en::StateBox{});
        const double floor = r.rho * kEos.e0(1.0 / r.rho) + 1.0 * r.rho * std::log(r.rho);
        CHECK(en::eta(r, kEos, 1.0) >= floor);
    }
}

TEST_CASE("chart round trip") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        const auto s = en::sample_state(rng, en::StateBox{});
        const auto V = en::to_chart(s);
        CHECK(V.size() == en::chart_size(2));
        const auto back = en::from_chart(V, 2);
        CHECK(back.rho == doctest::Approx(s.rho).epsilon(1e-14));
        CHECK((back.F - s.F).max_abs() <= 1e-13);
        CHECK((back.A - s.A).max_abs() <= 1e-12);
        CHECK(en::eta_chart(V, 2, kEos, 1.0) == doctest::Approx(en::eta(s, kEos, 1.0)).epsilon(1e-13));
    }
    en::ChartVector bad = en::to_chart(PrimitiveStateMD::rest(2));
    bad[0] = -1.0;
    CHECK_THROWS_AS(en::eta_chart(bad, 2, kEos, 1.0), DomainError);
}

TEST_CASE("gradient: momentum slot and finite differences") {
    const auto rest = en::to_chart(PrimitiveStateMD::rest(2));
    const auto g0 = en::grad_eta(rest, 2, kEos, 1.0);
    CHECK(g0[en::chart_mom_index(2, 0)] == 0.0);
    CHECK(g0[en::chart_mom_index(2, 1)] == 0.0);

    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto V = en::to_chart(en::sample_state(rng, en::StateBox{}));
        const auto g = en::grad_eta(V, 2, kEos, 1.3);
        en::ChartVector fd(V.size());
        for (Eigen::Index m = 0; m < V.size(); ++m) {
            const double h = 1e-5 * std::max(1.0, std::abs(V[m]));
            auto vp = V, vm = V;
            vp[m] += h;
            vm[m] -= h;
            fd[m] = (en::eta_chart(vp, 2, kEos, 1.3) - en::eta_chart(vm, 2, kEos, 1.3)) / (2 * h);
        }
        worst = std::max(worst, (fd - g).norm() / g.norm());
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("Hessian: finite differences, semidefiniteness and its null space") {
    std::mt19937_64 rng(2);
    double worst_fd = 0.0;
    double worst_ratio = 1.0;
    for (int k = 0; k < 100; ++k) {
        const auto V = en::to_chart(en::sample_state(rng, en::StateBox{}));
        const auto H = en::hess_eta(V, 2, kEos, 1.0);
        CHECK((H - H.transpose()).norm() <= 1e-12 * H.norm());
        en::ChartMatrix fd(V.size(), V.size());
        for (Eigen::Index m = 0; m < V.size(); ++m) {
            const double h = 1e-5 * std::max(1.0, std::abs(V[m]));
            auto vp = V, vm = V;
            vp[m] += h;
            vm[m] -= h;
            fd.col(m) = (en::grad_eta(vp, 2, kEos, 1.0) - en::grad_eta(vm, 2, kEos, 1.0)) / (2 * h);
        }
        worst_fd = std::max(worst_fd, (fd - H).norm() / H.norm());

        Eigen::SelfAdjointEigenSolver<en::ChartMatrix> es(H);
        const auto& ev = es.eigenvalues();
        const double ratio = ev[0] / ev[ev.size() - 1];
        worst_ratio = std::min(worst_ratio, ratio);
        int null = 0;
        for (Eigen::Index r = 0; r < ev.size(); ++r) null += std::abs(ev[r]) <= 1e-10 * ev[ev.size() - 1];
        CHECK(null == 3);  // d(d+1)/2 directions (dP = P Y^-1 Z, dY = Z)
    }
    CHECK(worst_fd <= 1e-6);
    CHECK(worst_ratio >= -1e-12);
}

TEST_CASE("Taylor remainder Z") {
    const auto V = en::to_chart(PrimitiveStateMD::rest(2));
    CHECK(en::taylor_remainder_Z(V, V, 2, kEos, 1.0).norm() == 0.0);

    // ||Z|| / eps^2 converges to |D3 eta[W, W]| / 2 with an O(eps) correction.
    std::mt19937_64 rng(6);
    for (int k = 0; k < 100; ++k) {
        const auto V2 = en::to_chart(en::sample_state(rng, en::StateBox{}));
        const auto W = random_direction(rng, V2.size());
        double q[3];
        int i = 0;
        for (double eps : {1e-1, 1e-2, 1e-3}) q[i++] = en::taylor_remainder_Z(V2 + eps * W, V2, 2, kEos, 1.0).norm() / (eps * eps);
        CHECK(std::abs(q[1] - q[2]) <= 0.05 * q[2]);
        CHECK(std::abs(q[0] - q[2]) >= std::abs(q[1] - q[2]));
    }

    // Quadratic entropy: the remainder vanishes identically.
    const Eigen::Index n = 5;
    en::ChartMatrix Q = en::ChartMatrix::Random(n, n);
    Q = Q * Q.transpose() + en::ChartMatrix::Identity(n, n);
    const auto grad = [&](const en::ChartVector& x) -> en::ChartVector { return Q * x; };
    const auto hess = [&](const en::ChartVector&) -> en::ChartMatrix { return Q; };
    const en::ChartVector a = en::ChartVector::Random(n), b = en::ChartVector::Random(n);
    CHECK(en::taylor_remainder_Z(a, b, grad, hess).norm() <= 1e-14 * (Q * a).norm());
}

TEST_CASE("relative entropy") {
    const auto g = make_initial_grid(InitialData::deformation_map, 16, 16);
    const auto same = en::relative_entropy(g, g, kEos, 1.0);
    CHECK(same.rel_entropy == 0.0);
    CHECK(same.l2_diff == 0.0);
    CHECK_THROWS_AS(en::relative_entropy(g, make_initial_grid(InitialData::deformation_map, 8, 8), kEos, 1.0),
                    ConfigError);

    // Small perturbation: RE / eps^2 -> (1/2) V.H.V, Richardson over eps = 1e-2, 1e-3.
    std::mt19937_64 rng(8);
    const auto s2 = en::sample_state(rng, en::StateBox{});
    const auto V2 = en::to_chart(s2);
    const auto W = random_direction(rng, V2.size());
    const double target = 0.5 * W.dot(en::hess_eta(V2, 2, kEos, 1.0) * W);
    auto ratio = [&](double eps) {
        const Grid2D a = uniform_grid(en::from_chart(V2 + eps * W, 2), 4);
        const Grid2D b = uniform_grid(s2, 4);
        return en::relative_entropy(a, b, kEos, 1.0).rel_entropy / (eps * eps);
    };
    const double r1 = ratio(1e-2), r2 = ratio(1e-3);
    const double extrapolated = (10.0 * r2 - r1) / 9.0;
    CHECK(std::abs(r2 - target) <= 2e-2 * std::abs(target));
    CHECK(std::abs(extrapolated - target) <= 1e-4 * std::abs(target));

    // Near-symmetry: |RE(U1,U2) - RE(U2,U1)| = O(|U1 - U2|^3).
    double prev = 0.0;
    for (double eps : {1e-2, 5e-3}) {
        const Grid2D a = uniform_grid(en::from_chart(V2 + eps * W, 2), 4);
        const Grid2D b = uniform_grid(s2, 4);
        const double asym =
            std::abs(en::relative_entropy(a, b, kEos, 1.0).rel_entropy - en::relative_entropy(b, a, kEos, 1.0).rel_entropy);
        if (prev > 0.0) CHECK(prev / asym == doctest::Approx(8.0).epsilon(0.1));
        prev = asym;
    }
}

TEST_CASE("source bounds") {
    const auto r = en::source_bounds_check(en::StateBox{}, 50, 3);
    CHECK(r.samples == 50);
    CHECK(std::isfinite(r.lipschitz_max));
    CHECK(std::isfinite(r.remainder_max));
    CHECK(r.lipschitz_max > 0.0);

    // Equilibrium pairs: Pi = 0 on both sides.
    const auto F = SquareMatrix::from_rows(2, {1.1, 0.1, 0.0, 0.95});
    PrimitiveStateMD s = PrimitiveStateMD::rest(2);
    s.F = F;
    s.A = congruence(F.inverse(), SquareMatrix::identity(2));
    auto s2 = s;
    s2.rho = 1.4;
    const auto d = source_pi(primitive_to_conserved(s));
    const auto d2 = source_pi(primitive_to_conserved(s2));
    for (int m = 0; m < d.size(); ++m) CHECK(std::abs(d[m] - d2[m]) <= 1e-15);
}

TEST_CASE("balance residuals vanish on uniform equilibrium") {
    const auto F = SquareMatrix::from_rows(2, {1.1, 0.2, -0.1, 0.9});
    PrimitiveStateMD s = PrimitiveStateMD::rest(2);
    s.rho = 1.2;
    s.F = F;
    s.A = congruence(F.inverse(), SquareMatrix::identity(2));
    const Grid2D g = uniform_grid(s, 8);
    CHECK(en::entropy_balance_residual(g, g, g, 0.01, kEos, 1.0, 0.5) <= 1e-12);
    const auto c = en::constitutive_residual(g, g, g, 0.01, MaterialParams{1.0, 0.5, 1.0});
    CHECK(c.consistent <= 1e-12);
    CHECK(c.literal <= 1e-12);
    CHECK_FALSE(c.rescaled);
    CHECK(en::constitutive_residual(g, g, g, 0.01, MaterialParams{1.0, 0.0, 1.0}).rescaled);
}

TEST_CASE("entropy flux at rest and in translation") {
    const auto rest = PrimitiveStateMD::rest(2);
    const auto q = en::entropy_flux(rest, kEos, 1.0);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 0.0);
    auto moving = rest;
    moving.u = {0.5, 0.0, 0.0};
    const double eta = en::eta(moving, kEos, 1.0);
    CHECK(en::entropy_flux(moving, kEos, 1.0)[0] == doctest::Approx(0.5 * (eta + kEos.pressure(1.0))));
}

TEST_CASE("constitutive residual embeds the 1D shear law") {
    // x-uniform simple shear: u = (v(y, t), 0), F = [[1, g], [0, 1]], tau_22 = 0,
    // tau_12 = s(y, t). The (0, 1) literal residual must equal the centred 1D
    // residual lambda s_t + s - mu_dot v_y on the same samples.
    const double G = 1.0, xi = 0.5, lambda = 1.0 / xi, mu_dot = G / xi;
    const int nx = 4, ny = 64;
    const double dt = 1e-3;
    auto v = [](double y, double t) { return 0.1 * std::sin(kTwoPi * y) * std::cos(t); };
    auto sh = [](double y, double t) { return 0.05 * std::cos(kTwoPi * y) * (1.0 + t); };
    auto s11 = [](double y) { return 0.02 * std::sin(kTwoPi * y); };
    auto gam = [](double y, double t) { return 0.1 * std::sin(kTwoPi * y) * t; };

    auto snapshot = [&](double t) {
        Grid2D g(nx, ny);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double y = g.cell_y(j);
                PrimitiveStateMD s = PrimitiveStateMD::rest(2);
                s.u = {v(y, t), 0.0, 0.0};
                s.F = SquareMatrix::from_rows(2, {1.0, gam(y, t), 0.0, 1.0});
                const auto B = SquareMatrix::from_rows(2, {1.0 + s11(y) / G, sh(y, t) / G, sh(y, t) / G, 1.0});
                const auto Finv = s.F.inverse();
                s.A = (Finv * B * Finv.transpose()).symmetrized();
                g.at(i, j) = primitive_to_conserved(s);
            }
        return g;
    };
    const double t = 0.3;
    const auto c = en::constitutive_residual(snapshot(t - dt), snapshot(t), snapshot(t + dt), dt,
                                             MaterialParams{G, xi, 1.0});

    const double dy = 1.0 / ny;
    double oracle = 0.0;
    for (int j = 0; j < ny; ++j) {
        const double y = (j + 0.5) * dy;
        const double s_t = (sh(y, t + dt) - sh(y, t - dt)) / (2 * dt);
        const double v_y = (v(y + dy, t) - v(y - dy, t)) / (2 * dy);
        oracle = std::max(oracle, std::abs(lambda * s_t + sh(y, t) - mu_dot * v_y));
    }
    CHECK(c.literal_components(0, 1) == doctest::Approx(oracle).epsilon(1e-8));
}
