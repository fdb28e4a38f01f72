#pragma once

namespace gausscurv {

/// One verified inequality instance lhs <= rhs.
///
/// The inequality passes when the signed margin rhs - lhs is no worse than
/// the negated quadrature error estimate, so non-strict claims are checked
/// with slack.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double quad_error = 0.0;
  bool passed = false;

  static InequalityReport make(double lhs, double rhs, double quad_error) {
    InequalityReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.quad_error = quad_error;
    r.passed = r.margin >= -quad_error;
    return r;
  }
};

}  // namespace gausscurv
