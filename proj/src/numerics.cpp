#include "gausscurv/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "gausscurv/error.hpp"

namespace gausscurv {

Estimate integrate(const ScalarFunction& f, double a, double b, double rel_tol,
                   double abs_tol) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(f, a, b, 20, rel_tol, &error, &l1);
  if (!std::isfinite(value)) {
    throw NumericalError("integrate: non-finite result on [" + std::to_string(a) +
                         ", " + std::to_string(b) + "]");
  }
  // The Kronrod-Gauss difference is pessimistic once the rule has converged;
  // accept when it is within tolerance of either the value or the L1 mass.
  const double scale = std::max(std::abs(value), l1);
  if (error > rel_tol * scale + abs_tol && error > 1e-14 * scale) {
    throw NumericalError("integrate: no convergence on [" + std::to_string(a) + ", " +
                         std::to_string(b) + "], error estimate " + std::to_string(error));
  }
  return {value, error};
}

double find_root(const ScalarFunction& f, double lo, double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericalError("find_root: interval [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] does not bracket a root");
  }
  std::uintmax_t max_iter = 200;
  boost::math::tools::eps_tolerance<double> tol(52);
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace gausscurv
