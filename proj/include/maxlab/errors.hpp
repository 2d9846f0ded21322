/// @file errors.hpp
/// @brief Exception types shared by all maxlab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace maxlab {

/// State outside the hyperbolicity domain (rho <= 0, singular F, A not SPD).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Time step violates the CFL restriction of a scheme.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundary relation that cannot be solved for the incoming characteristic.
class SingularBoundaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent inputs: mismatched grids, bad config fields, invalid BCs.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unusable data handed to a fitting/analysis routine.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or Inf detected while stepping.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace maxlab
