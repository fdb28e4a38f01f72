#pragma once

#include <stdexcept>

namespace gausscurv {

/// An operation was called outside its domain, or a hypothesis it
/// relies on (convexity, origin containment, ...) does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed: quadrature did not converge, a root was not
/// bracketed, an extrapolation did not settle.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gausscurv
