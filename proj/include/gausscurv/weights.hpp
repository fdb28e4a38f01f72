#pragma once

#include <functional>
#include <vector>

namespace gausscurv {

using Evaluator = std::function<double(double)>;

/// A radial boundary weight f together with its derivative and the induced
/// area weight w(r) = -f'(r) / r.
///
/// f is required to be positive and non-increasing on the validated radius
/// range. Instances are immutable and safe to share across threads.
class WeightPair {
 public:
  double f(double r) const { return f_(r); }
  double df(double r) const { return df_(r); }
  /// Area weight; defined for r > 0.
  double w(double r) const { return gaussian_ ? f_(r) : -df_(r) / r; }

  /// w sampled non-increasing on the validation grid.
  bool monotone_w() const { return monotone_w_; }
  bool is_gaussian() const { return gaussian_; }
  /// Upper end of the radius range on which admissibility was checked.
  double max_radius() const { return max_radius_; }

 private:
  friend WeightPair make_gaussian_weight();
  friend WeightPair make_weight(Evaluator f, Evaluator df, double max_radius);

  WeightPair(Evaluator f, Evaluator df, bool monotone_w, bool gaussian, double max_radius)
      : f_(std::move(f)),
        df_(std::move(df)),
        monotone_w_(monotone_w),
        gaussian_(gaussian),
        max_radius_(max_radius) {}

  Evaluator f_;
  Evaluator df_;
  bool monotone_w_;
  bool gaussian_;
  double max_radius_;
};

/// f(r) = w(r) = exp(-r^2/2), without dimensional normalisation.
WeightPair make_gaussian_weight();

/// Builds a weight pair from f and f'. Admissibility (f > 0, f' <= 0) is
/// checked on 1000 log-spaced radii in (1e-6, max_radius); throws
/// PreconditionError otherwise. A smaller max_radius admits weights that are
/// only meaningful on a bounded range, such as f(r) = C - r^2/2.
WeightPair make_weight(Evaluator f, Evaluator df, double max_radius = 1e3);

/// The validation grid used by make_weight.
std::vector<double> admissibility_grid(double max_radius = 1e3);

/// Gaussian measure of the half space {x_1 <= s}: the standard normal CDF.
double psi(double s);

/// Inverse of psi on (0, 1).
double psi_inverse(double p);

/// a_n = int_0^1 t^{n-1} e^{-r^2 t^2/2} dt and the two higher moments
/// b_n (t^{n+1}) and c_n (t^{n+3}), each by direct quadrature. The
/// *_recurrence members hold the values obtained from a_n by integration by
/// parts; residual_* are the absolute differences.
struct RadialMoments {
  int n = 0;
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double b_recurrence = 0.0;
  double c_recurrence = 0.0;
  double residual_b = 0.0;
  double residual_c = 0.0;
};

RadialMoments radial_moments(int n, double r);

/// int_0^h t^{n-1} e^{-t^2/2} dt, via the regularised incomplete gamma.
double gaussian_radial_integral(int n, double h);

}  // namespace gausscurv
