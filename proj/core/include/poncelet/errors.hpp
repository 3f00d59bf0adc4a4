#pragma once

#include <stdexcept>
#include <string>

namespace poncelet {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//! Invalid input values (out-of-range parameters, wrong parity, bad preconditions).
class DomainError : public Error {
  public:
    using Error::Error;
};

//! A chord degenerated to a tangential grazing segment.
class TangencyError : public Error {
  public:
    using Error::Error;
};

//! Geometric degeneracy: parallel lines, pole at infinity, collapsed stretch.
class DegeneracyError : public Error {
  public:
    using Error::Error;
};

//! Least-squares conic fit could not be solved (rank-deficient constraints).
class FitError : public Error {
  public:
    using Error::Error;
};

//! No periodic orbit with the requested period and rotation number was bracketed.
class NoOrbitError : public Error {
  public:
    using Error::Error;
};

//! An iterative solver exhausted its iteration budget.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

//! A member of a family sweep failed its closure tolerance.
class MemberError : public Error {
  public:
    MemberError(int index, const std::string& what)
        : Error("sweep member " + std::to_string(index) + ": " + what), index_(index) {}
    int index() const { return index_; }

  private:
    int index_;
};

//! I/O failure, annotated with the offending path.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace poncelet
