#include "gausscurv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gausscurv/error.hpp"
#include "gausscurv/weights.hpp"

namespace gausscurv {

namespace {
constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
}  // namespace

double cylinder_volume(double s) {
  if (!(s > 0.0)) throw PreconditionError("cylinder_volume: s must be positive");
  return -std::expm1(-0.5 * s * s);
}

double cylinder_energy(double s) {
  if (!(s > 0.0)) throw PreconditionError("cylinder_energy: s must be positive");
  return std::pow(2.0 * kPi, 1.5) * std::exp(-0.5 * s * s);
}

double matched_cylinder_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw PreconditionError("matched_cylinder_radius: r must be positive");
  }
  const double volume = ball_gaussian_volume(3, r);
  if (!(volume < 1.0)) {
    throw PreconditionError("matched_cylinder_radius: gamma(B_r) rounds to 1");
  }
  return std::sqrt(-2.0 * std::log1p(-volume));
}

double counterexample_gap(double r) {
  return cylinder_energy(matched_cylinder_radius(r)) - ball_energy(3, r);
}

CappedCylinder capped_cylinder(const CylinderSpec& spec) {
  const double s = spec.s;
  const double T = spec.T;
  if (spec.infinite) throw PreconditionError("capped_cylinder: spec must be finite");
  if (!(s > 0.0) || !(T >= s)) throw PreconditionError("capped_cylinder: need T >= s > 0");

  const auto slab_z = integrate([](double z) { return std::exp(-0.5 * z * z); }, -T, T);
  // Gaussian mass of the disc of radius rho in the x' plane is 1 - e^{-rho^2/2}.
  const auto cap_volume = integrate(
      [s, T](double z) {
        const double d = z - T;
        return std::exp(-0.5 * z * z) * -std::expm1(-0.5 * (s * s - d * d));
      },
      T, T + s);
  // Hemisphere at (0, 0, T): |x|^2 = s^2 + T^2 + 2 s T t with t the polar cosine.
  const auto cap_energy = integrate([s, T](double t) { return std::exp(-s * T * t); }, 0.0, 1.0);

  const double disc = cylinder_volume(s);
  const double cap_scale = 2.0 * 2.0 * kPi * 2.0 * s * std::exp(-0.5 * (s * s + T * T));
  CappedCylinder out;
  out.volume.value = (disc * slab_z.value + 2.0 * cap_volume.value) / kSqrt2Pi;
  out.volume.error = (disc * slab_z.error + 2.0 * cap_volume.error) / kSqrt2Pi;
  const double lateral = 2.0 * kPi * std::exp(-0.5 * s * s);
  out.energy.value = lateral * slab_z.value + cap_scale * cap_energy.value;
  out.energy.error = lateral * slab_z.error + cap_scale * cap_energy.error;
  return out;
}

CappedCounterexample capped_counterexample(double r, double T) {
  CappedCounterexample out;
  out.r = r;
  out.s = matched_cylinder_radius(r);
  out.T = T;
  out.capped = capped_cylinder({out.s, T, false});
  out.matched_radius = ball_radius_for_volume(3, out.capped.volume.value);
  out.ball_energy = ball_energy(3, out.matched_radius);
  out.report = InequalityReport::make(out.ball_energy, out.capped.energy.value,
                                      out.capped.energy.error);
  out.report.passed = out.report.margin > out.report.quad_error;
  return out;
}

double quadratic_coefficient(int n, double r, int k) {
  if (k < 2 || k % 2 != 0) throw PreconditionError("quadratic_coefficient: k must be even >= 2");
  if (n < 2) throw PreconditionError("quadratic_coefficient: n must be >= 2");
  const double kk = k * (k + n - 2.0);
  return std::pow(r, n - 2) * std::exp(-0.5 * r * r) *
         ((n - 2.0 - r * r) * kk - (n - 1.0) * (n - 2.0));
}

double critical_radius_squared(int n, int k) {
  return (n - 2.0) * (1.0 - (n - 1.0) / (k * (k + n - 2.0)));
}

double proof_threshold(int n) { return (n - 2.0) * (n + 1.0) / (2.0 * n); }

double statement_threshold(int n) { return (n - 2.0) * (n - 1.0) / (2.0 * n); }

namespace {

void check_variation_args(int n, double r, int k) {
  if (n < 3 || n > 8) throw PreconditionError("second variation: n must be in [3, 8]");
  if (!(r > 0.0)) throw PreconditionError("second variation: r must be positive");
  if (k < 2 || k % 2 != 0) throw PreconditionError("second variation: k must be even >= 2");
  if (n == 3 && k > 16) throw PreconditionError("second variation: k above the n = 3 cap");
  if (k > 64) throw PreconditionError("second variation: k above the zonal cap");
}

}  // namespace

double matched_gap(int n, double r, int k, double epsilon) {
  check_variation_args(n, r, k);
  if (epsilon == 0.0) return 0.0;
  const Basis basis = n == 3 ? Basis::full : Basis::zonal;
  const int grid = std::max(k, 8);
  RadialGraph body(r, HarmonicField::mode(n, k, basis, k, 1, epsilon), grid, true);
  const auto matched = volume_match(body, ball_gaussian_volume(n, r));
  return curvature_energy_nd(matched).value - ball_energy(n, r);
}

VariationReport measure_second_variation(int n, double r, int k, double epsilon) {
  check_variation_args(n, r, k);
  VariationReport out;
  out.n = n;
  out.r = r;
  out.k = k;
  out.epsilon = epsilon;
  out.predicted_coefficient = quadratic_coefficient(n, r, k);
  if (epsilon == 0.0) return out;
  if (!(epsilon <= 1e-2 && epsilon / 4.0 >= 1e-4)) {
    throw PreconditionError("measure_second_variation: epsilon must lie in [4e-4, 1e-2]");
  }
  std::array<double, 3> q{};
  for (int j = 0; j < 3; ++j) {
    const double e = epsilon / std::pow(2.0, j);
    out.gaps[j] = matched_gap(n, r, k, e);
    q[j] = out.gaps[j] / (e * e);
  }
  // q(e) = c2 + c3 e + c4 e^2 + ...
  const double r1a = 2.0 * q[1] - q[0];
  const double r1b = 2.0 * q[2] - q[1];
  const double r2 = (4.0 * r1b - r1a) / 3.0;
  const double scale =
      std::pow(r, n - 2) * std::exp(-0.5 * r * r) * (k * (k + n - 2.0) + (n - 1.0) * (n - 2.0));
  if (!(std::abs(r2 - r1b) <= 1e-2 * scale)) {
    throw NumericalError("measure_second_variation: Richardson extrapolation did not settle");
  }
  out.measured_gap = out.gaps[0];
  out.predicted_quadratic = out.predicted_coefficient * epsilon * epsilon;
  out.extrapolated_coefficient = r2;
  out.relative_error = std::abs(r2 - out.predicted_coefficient) /
                       std::max(std::abs(out.predicted_coefficient), 1e-300);
  return out;
}

ThresholdReport threshold_scan(int n, int k, double epsilon) {
  check_variation_args(n, 1.0, k);
  ThresholdReport out;
  out.n = n;
  out.k = k;
  out.algebraic = critical_radius_squared(n, k);
  out.proof_candidate = proof_threshold(n);
  out.statement_candidate = statement_threshold(n);
  const auto sign_of = [&](double r2) {
    ++out.evaluations;
    const double r = std::sqrt(r2);
    return measure_second_variation(n, r, k, epsilon).extrapolated_coefficient /
           (std::pow(r, n - 2) * std::exp(-0.5 * r2));
  };
  const int steps = 24;
  const double top = n - 2.0 + 0.5;
  double lo = top / steps;
  double flo = sign_of(lo);
  double hi = lo;
  double fhi = flo;
  bool bracketed = false;
  for (int i = 2; i <= steps; ++i) {
    hi = top * i / steps;
    fhi = sign_of(hi);
    if ((flo > 0.0) != (fhi > 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    flo = fhi;
  }
  if (!bracketed) throw NumericalError("threshold_scan: no sign change on the scan grid");
  while (hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = sign_of(mid);
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  out.measured = 0.5 * (lo + hi);
  return out;
}

CalibrationReport calibration_check(const RadialGraph& body, double M, double slack) {
  const int n = body.dimension();
  if (n < 3) throw PreconditionError("calibration_check: n must be >= 3");
  if (!(M > 0.0)) throw PreconditionError("calibration_check: M must be positive");
  if (!body.is_convex()) {
    throw PreconditionError("calibration_check: body fails the convexity certificate");
  }
  CalibrationReport out;
  const auto volume = gaussian_volume(body);
  out.volume = volume.value;
  out.curvature_bound = M;
  out.inscribed_radius = inscribed_radius(body);
  out.hypothesis_ok = out.volume >= std::max(psi(2.0 * M), psi(std::sqrt(n - 2.0)));
  out.inscribed_gate = out.inscribed_radius >= std::max(2.0 * M, std::sqrt(2.0 * (n - 2.0)));
  out.inscribed_gate_strong = out.inscribed_radius >= std::max(2.0 * M, 2.0 * std::sqrt(n - 2.0));

  const double r = ball_radius_for_volume(n, out.volume);
  out.matched_radius = r;
  const double area = sphere_area(n);
  const double density = area * std::pow(r, n - 1) * std::exp(-0.5 * r * r) /
                         std::pow(2.0 * kPi, 0.5 * n);
  const double slope = area * (n - 1.0) * std::exp(-0.5 * r * r) *
                       ((n - 2.0) * std::pow(r, n - 3) - std::pow(r, n - 1));
  const double ball_error = std::abs(slope) * volume.error / density;
  const double ball = ball_energy(n, r);

  const auto energy = curvature_energy_nd(body);
  const auto flux = flux_energy(body);
  out.ineq1 = InequalityReport::make(energy.value, ball, energy.error + ball_error + slack);
  out.ineq3 = InequalityReport::make(flux.value, ball, flux.error + ball_error + slack);
  return out;
}

double mean_zero_leakage(const HarmonicField& u) {
  const double norm = u.l2_norm_squared();
  if (norm == 0.0) return 0.0;
  const double mean = u.integral();
  return mean * mean / norm;
}

HarmonicField relative_perturbation(const RadialGraph& body, double base_radius) {
  if (!(base_radius > 0.0)) {
    throw PreconditionError("relative_perturbation: base radius must be positive");
  }
  const double s = body.radius() / base_radius;
  const auto& u = body.perturbation();
  return u.scaled(s).plus(
      HarmonicField::constant(u.dimension(), u.max_degree(), u.basis(), s - 1.0));
}

}  // namespace gausscurv
