#pragma once

#include <stdexcept>
#include <string>

namespace asianpde {

/// Invalid user input: market data, grid parameters, CLI flags.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not be completed to its contract (insufficient
/// truncation, non-monotone refinement data, too few usable samples).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A proven estimate was violated beyond the noise tolerance.
class BoundViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace asianpde
