#pragma once

#include <stdexcept>
#include <string>

namespace relmech {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

/// Mismatched dimensions between charts, states and field components.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// The metric determinant vanished (relative to the row scale) at an
/// evaluation point.  Non-degeneracy is required everywhere.
class SingularMetricError : public Error {
public:
    using Error::Error;
};

/// A diagnostic was invoked on inputs violating its precondition; this is
/// not a verdict, the check never ran.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A force failed the velocity-linearity probe of a check that only makes
/// sense for velocity-linear forces.
class NonlinearityError : public Error {
public:
    using Error::Error;
};

} // namespace relmech
