#pragma once

#include <array>
#include <vector>

#include "gausscurv/body.hpp"
#include "gausscurv/numerics.hpp"
#include "gausscurv/report.hpp"
#include "gausscurv/sphere.hpp"

namespace gausscurv {

// Cylinders in R^3 --------------------------------------------------------

/// Solid cylinder {|x'| <= s}, optionally truncated to |x_3| < T and closed
/// with two hemispherical caps of radius s.
struct CylinderSpec {
  double s = 1.0;
  double T = 0.0;
  bool infinite = true;
};

/// gamma(C_s) = 1 - e^{-s^2/2}.
double cylinder_volume(double s);
/// H(C_s) = (2 pi)^{3/2} e^{-s^2/2}.
double cylinder_energy(double s);
/// s with gamma(C_s) = gamma(B_r) in R^3.
double matched_cylinder_radius(double r);
/// H(C_{s(r)}) - H(B_r).
double counterexample_gap(double r);

struct CappedCylinder {
  Estimate volume;
  Estimate energy;
};
/// Volume and energy of the capped cylinder. Requires a finite CylinderSpec with
/// T >= s.
CappedCylinder capped_cylinder(const CylinderSpec& spec);

struct CappedCounterexample {
  double r = 0.0;             ///< ball radius defining s(r)
  double s = 0.0;
  double T = 0.0;
  CappedCylinder capped;
  double matched_radius = 0.0;  ///< r' with gamma(B_r') = gamma(C_{T,s})
  double ball_energy = 0.0;     ///< H(B_r')
  InequalityReport report;      ///< H(B_r') <= H(C_{T,s}), strict margin reported
};
CappedCounterexample capped_counterexample(double r, double T = 40.0);

// Second variation around the ball ----------------------------------------

/// r^{n-2} e^{-r^2/2} [(n-2-r^2) k(k+n-2) - (n-1)(n-2)].
double quadratic_coefficient(int n, double r, int k);

/// Root in r^2 of quadratic_coefficient for mode k.
double critical_radius_squared(int n, int k);

/// (n-2)(n+1)/(2n) and (n-2)(n-1)/(2n): the two candidate symmetric
/// thresholds.
double proof_threshold(int n);
double statement_threshold(int n);

struct VariationReport {
  int n = 0;
  double r = 0.0;
  int k = 0;
  double epsilon = 0.0;
  /// H(E) - H(B_r) after volume matching, at epsilon, epsilon/2, epsilon/4.
  std::array<double, 3> gaps{};
  double measured_gap = 0.0;             ///< gaps[0]
  double predicted_quadratic = 0.0;      ///< coefficient * epsilon^2
  double extrapolated_coefficient = 0.0; ///< Richardson limit of gap / epsilon^2
  double predicted_coefficient = 0.0;
  /// |extrapolated - predicted| / max(|predicted|, 1e-300).
  double relative_error = 0.0;
};

/// Perturbation u = epsilon y_{k,1} (full basis, n = 3) or epsilon Z_k (zonal,
/// n >= 4) of B_r, volume matched by dilation. Requires even k >= 2 and
/// 4e-4 <= epsilon <= 1e-2 (epsilon = 0 returns an all-zero report). Throws
/// NumericalError when the extrapolation has not settled.
VariationReport measure_second_variation(int n, double r, int k, double epsilon);

/// Matched gap H(E) - H(B_r) for a single epsilon.
double matched_gap(int n, double r, int k, double epsilon);

struct ThresholdReport {
  int n = 0;
  int k = 0;
  double measured = 0.0;   ///< r^2 where the extrapolated coefficient changes sign
  double algebraic = 0.0;  ///< critical_radius_squared(n, k)
  double proof_candidate = 0.0;
  double statement_candidate = 0.0;
  int evaluations = 0;
};

/// Scans r^2 and bisects on the sign of the extrapolated coefficient until
/// the bracket is narrower than 1e-5.
ThresholdReport threshold_scan(int n, int k, double epsilon = 1e-3);

// Calibration ---------------------------------------------------------------

struct CalibrationReport {
  double volume = 0.0;            ///< m = gamma(E)
  double matched_radius = 0.0;    ///< r with gamma(B_r) = m
  double inscribed_radius = 0.0;  ///< r_E
  double curvature_bound = 0.0;   ///< M
  /// m >= max{psi(2M), psi(sqrt(n-2))}.
  bool hypothesis_ok = false;
  /// r_E >= max{2M, sqrt(2(n-2))}.
  bool inscribed_gate = false;
  /// r_E >= max{2M, 2 sqrt(n-2)}.
  bool inscribed_gate_strong = false;
  InequalityReport ineq1;  ///< H(E) <= H(B_r)
  InequalityReport ineq3;  ///< flux energy of E <= that of B_r
};

/// Requires n >= 3 and a body passing the convexity certificate
/// (PreconditionError otherwise).
CalibrationReport calibration_check(const RadialGraph& body, double M, double slack = 1e-6);

/// |int u|^2 / ||u||^2.
double mean_zero_leakage(const HarmonicField& u);

/// u' with h = base_radius (1 + u') for the body's h.
HarmonicField relative_perturbation(const RadialGraph& body, double base_radius);

}  // namespace gausscurv
