#include "maxlab/core.hpp"
#include "maxlab/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace maxlab {

std::string_view to_string(EosKind kind) {
    switch (kind) {
        case EosKind::isothermal:
            return "isothermal";
    }
    return "unknown";
}

double Eos::e0(double nu) const { return -c0 * c0 * std::log(nu); }
double Eos::de0(double nu) const { return -c0 * c0 / nu; }
double Eos::d2e0(double nu) const { return c0 * c0 / (nu * nu); }
double Eos::pressure(double rho) const { return -de0(1.0 / rho); }
double Eos::dpressure(double /*rho*/) const { return c0 * c0; }

std::string Eos::tag() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind) << "(c0=" << c0 << ")";
    return os.str();
}

double eos_pressure(const Eos& eos, double rho) {
    if (!(rho > 0.0)) throw DomainError("eos_pressure: density must be positive");
    return eos.pressure(rho);
}

double MaterialParams::mu_dot() const {
    return xi > 0.0 ? G / xi : std::numeric_limits<double>::infinity();
}

double MaterialParams::lambda() const {
    return xi > 0.0 ? 1.0 / xi : std::numeric_limits<double>::infinity();
}

void MaterialParams::validate() const {
    if (!(std::isfinite(G) && G > 0.0)) throw ConfigError("G must be finite and > 0");
    if (!(std::isfinite(xi) && xi >= 0.0)) throw ConfigError("xi must be finite and >= 0");
    if (!(std::isfinite(c0) && c0 > 0.0)) throw ConfigError("c0 must be finite and > 0");
}

SquareMatrix congruence(const SquareMatrix& F, const SquareMatrix& A) {
    // Pairs the (k,l) and (l,k) terms so that (i,j) and (j,i) are bitwise
    // equal whenever A is exactly symmetric.
    const int d = F.dim();
    SquareMatrix out(d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) {
                s += A(k, k) * (F(i, k) * F(j, k));
                for (int l = k + 1; l < d; ++l) {
                    s += A(k, l) * (F(i, k) * F(j, l)) + A(l, k) * (F(i, l) * F(j, k));
                }
            }
            out(i, j) = s;
        }
    }
    return out;
}

SquareMatrix neo_hookean_stress(double rho, const SquareMatrix& F, const SquareMatrix& A, double G) {
    SquareMatrix tau = congruence(F, A);
    const double scale = rho * G;
    for (int i = 0; i < tau.dim(); ++i)
        for (int j = 0; j < tau.dim(); ++j) tau(i, j) = scale * (tau(i, j) - (i == j ? 1.0 : 0.0));
    return tau;
}

}  // namespace maxlab
