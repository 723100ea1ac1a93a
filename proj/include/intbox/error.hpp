#pragma once

#include <stdexcept>
#include <string>

namespace intbox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A precondition on a value was violated (negative radius, non-finite entry, bad step, ...).
class InvalidArgument : public Error {
   public:
    using Error::Error;
};

/// A numerical routine failed to deliver a trustworthy answer (e.g. eigen-solver non-convergence).
class NumericalError : public Error {
   public:
    using Error::Error;
};

}  // namespace intbox
