#ifndef MINTORUS_ERRORS_HPP
#define MINTORUS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mintorus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied parameters was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An eigensolve, integration or quadrature did not reach its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Output could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mintorus

#endif  // MINTORUS_ERRORS_HPP
