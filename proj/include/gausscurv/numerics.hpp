#pragma once

#include <functional>

namespace gausscurv {

/// A computed value together with an estimate of its absolute error.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

using ScalarFunction = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod integration of f over [a, b].
/// Throws NumericalError when the error estimate stays above
/// rel_tol * |value| + abs_tol.
Estimate integrate(const ScalarFunction& f, double a, double b,
                   double rel_tol = 1e-12, double abs_tol = 1e-300);

/// Root of a continuous function with f(lo) and f(hi) of opposite signs,
/// located to full double precision.
double find_root(const ScalarFunction& f, double lo, double hi);

}  // namespace gausscurv
