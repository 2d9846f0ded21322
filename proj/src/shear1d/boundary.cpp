#include "maxlab/errors.hpp"
#include "maxlab/shear1d.hpp"

#include <cmath>
#include <string>

namespace maxlab::shear1d {

namespace {

const char* side_name(Side side) { return side == Side::left ? "left" : "right"; }

}  // namespace

BoundarySpec BoundarySpec::periodic(Side side) {
    return BoundarySpec{side, BoundaryKind::periodic, 0.0, 0.0, {}};
}

BoundarySpec BoundarySpec::dissipative(Side side, double c_u, double c_tau, BoundaryData g) {
    return BoundarySpec{side, BoundaryKind::dissipative, c_u, c_tau, std::move(g)};
}

BoundarySpec BoundarySpec::dirichlet_velocity(Side side, BoundaryData g) {
    return BoundarySpec{side, BoundaryKind::dirichlet_velocity, 1.0, 0.0, std::move(g)};
}

void BoundarySpec::validate(double G) const {
    (void)G;
    switch (kind) {
        case BoundaryKind::periodic:
            return;
        case BoundaryKind::dirichlet_velocity:
            if (c_u != 1.0 || c_tau != 0.0) {
                throw ConfigError(std::string(side_name(side)) + " dirichlet_velocity boundary needs c_u = 1, c_tau = 0");
            }
            return;
        case BoundaryKind::dissipative: {
            if (!std::isfinite(c_u) || !std::isfinite(c_tau)) {
                throw ConfigError(std::string(side_name(side)) + " boundary coefficients must be finite");
            }
            const double prod = c_u * c_tau;
            if (side == Side::left && !(prod < 0.0)) {
                throw ConfigError("left dissipative boundary needs c_u * c_tau < 0");
            }
            if (side == Side::right && !(prod > 0.0)) {
                throw ConfigError("right dissipative boundary needs c_u * c_tau > 0");
            }
            return;
        }
    }
}

void validate_boundaries(const BoundarySpec& left, const BoundarySpec& right, double G) {
    if (left.side != Side::left || right.side != Side::right) {
        throw ConfigError("boundary specs passed on the wrong sides");
    }
    const bool lp = left.kind == BoundaryKind::periodic;
    const bool rp = right.kind == BoundaryKind::periodic;
    if (lp != rp) throw ConfigError("periodic boundaries must be periodic on both sides");
    left.validate(G);
    right.validate(G);
}

BoundaryFlux boundary_energy_flux(const BoundarySpec& bc, double G, double u, double tau, double g) {
    BoundaryFlux flux;
    switch (bc.kind) {
        case BoundaryKind::periodic:
            break;
        case BoundaryKind::dirichlet_velocity: {
            // dE/dt gains -2G tau u at y_min and +2G tau u at y_max.
            const double work = 2.0 * G * tau * u;
            flux.out = bc.side == Side::left ? work : -work;
            break;
        }
        case BoundaryKind::dissipative: {
            const double coeff = G / (2.0 * std::abs(bc.c_u * bc.c_tau));
            const double z = bc.c_u * u - bc.c_tau * tau;
            flux.out = coeff * z * z;
            flux.in = coeff * g * g;
            break;
        }
    }
    return flux;
}

}  // namespace maxlab::shear1d
