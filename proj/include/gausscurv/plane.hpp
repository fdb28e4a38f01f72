#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "gausscurv/numerics.hpp"
#include "gausscurv/report.hpp"
#include "gausscurv/weights.hpp"

namespace gausscurv {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Star-shaped planar curve rho(theta) (cos theta, sin theta), with rho a
/// trigonometric polynomial
///
///   rho(theta) = c_0 + sum_{k=1}^K (c_k cos k theta + s_k sin k theta).
///
/// rho, rho' and rho'' are cached on a uniform grid of N angles; the
/// derivatives are exact for the stored polynomial.
class PolarCurve {
 public:
  static constexpr int kDefaultDegree = 64;
  static constexpr int kDefaultGrid = 1024;

  /// cos_coeffs has K+1 entries (c_0..c_K), sin_coeffs has K (s_1..s_K).
  /// Requires 4K <= N and rho > 0 on the grid.
  PolarCurve(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
             int grid = kDefaultGrid);

  static PolarCurve circle(double radius, int degree = kDefaultDegree, int grid = kDefaultGrid);
  /// Trigonometric interpolant of degree K of an arbitrary positive periodic
  /// function, from 4K+... samples.
  static PolarCurve from_function(const std::function<double(double)>& rho,
                                  int degree = kDefaultDegree, int grid = kDefaultGrid);
  /// Centred ellipse with semi-axes a (along x) and b (along y).
  static PolarCurve ellipse(double a, double b, int degree = kDefaultDegree,
                            int grid = kDefaultGrid);

  int degree() const { return static_cast<int>(sin_.size()); }
  int grid_size() const { return static_cast<int>(rho_.size()); }
  std::span<const double> cos_coeffs() const { return cos_; }
  std::span<const double> sin_coeffs() const { return sin_; }

  double rho(double theta) const;
  double rho_d1(double theta) const;
  double rho_d2(double theta) const;
  double angle(int i) const;

  std::span<const double> rho_grid() const { return rho_; }
  std::span<const double> d1_grid() const { return d1_; }
  std::span<const double> d2_grid() const { return d2_; }

  double min_rho() const;
  double max_rho() const;
  /// min over the grid of rho^2 + 2 rho'^2 - rho rho'' (curvature numerator).
  double convexity_margin() const;
  bool is_convex() const { return convexity_margin() >= 0.0; }

  PolarCurve scaled(double factor) const;
  /// Same polynomial with the degree cap and grid both doubled.
  PolarCurve refined() const;
  /// Same polynomial on a different grid size.
  PolarCurve regridded(int grid) const;

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
  std::vector<double> rho_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

/// Plain-text curve format: a line with K, then K+1 cosine coefficients,
/// then K sine coefficients.
void write_curve(std::ostream& out, const PolarCurve& curve);
PolarCurve read_curve(std::istream& in, int grid = PolarCurve::kDefaultGrid);

/// (rho^2 + 2 rho'^2 - rho rho'') / (rho^2 + rho'^2)^{3/2}.
double curvature_at(const PolarCurve& curve, double theta);

/// |E|_w = int_E w(|x|) dx for the curve's region translated by offset.
Estimate weighted_area(const PolarCurve& curve, const WeightPair& wp, Vec2 offset = {});

/// |B_r|_w.
double ball_weighted_area(double r, const WeightPair& wp);

/// The unique r with |B_r|_w = area.
double matched_radius(double area, const WeightPair& wp);

/// int_{dE} H f(|x|) ds for the (optionally translated) curve.
Estimate curvature_energy(const PolarCurve& curve, const WeightPair& wp, Vec2 offset = {});

/// 2 pi f(r): the curvature energy of the centred disc of radius r.
double ball_curvature_energy(double r, const WeightPair& wp);

/// |x| - <x, nu>^2 / |x| = rho rho'^2 / (rho^2 + rho'^2).
double normal_deficiency(const PolarCurve& curve, double theta);

/// Same quantity from the Cartesian position and outward unit normal.
double normal_deficiency_cartesian(const PolarCurve& curve, double theta);

struct AlphaBeta {
  /// -int (|x| - <x,nu>^2/|x|) f'(|x|) ds.
  Estimate alpha;
  /// int (|x| - <x,nu>^2/|x|) (f - |x| f') / |x|^2 ds.
  Estimate beta;
  /// -int (|x| - <x,nu>^2/|x|) f'(|x|) / |x| ds, a lower bound for the
  /// curvature-energy gap that holds for every convex curve.
  Estimate alpha_radial;
};

AlphaBeta alpha_beta(const PolarCurve& curve, const WeightPair& wp);

struct TwoSidedReport {
  double radius = 0.0;          ///< matched ball radius
  double gap = 0.0;             ///< H_f(B_r) - H_f(E)
  InequalityReport lower;       ///< alpha_f <= gap
  InequalityReport upper;       ///< gap <= beta_f
  InequalityReport lower_radial;  ///< alpha_radial <= gap
  InequalityReport ball_bound;  ///< H_f(E) <= H_f(B_r)
};

/// Checks alpha_f(E) <= H_f(B_r) - H_f(E) <= beta_f(E) with r matched in
/// weighted area. Throws PreconditionError when the convexity certificate
/// fails. slack is added to the quadrature error estimate.
TwoSidedReport verify_two_sided(const PolarCurve& curve, const WeightPair& wp,
                                double slack = 1e-8);

/// int_{dB_r} f/|x| <= int_{dE} f/|x| with |E|_w = |B_r|_w. Requires
/// min rho >= 1e-6.
InequalityReport boundary_inverse_weight(const PolarCurve& curve, const WeightPair& wp,
                                         double slack = 1e-8);

/// Sign check H_f(E) <= H_f(B_r) for the region translated by
/// offset (which may leave the origin outside the region).
InequalityReport ball_maximality(const PolarCurve& curve, const WeightPair& wp,
                                 Vec2 offset = {}, double slack = 1e-8);

/// Hausdorff distance between the two closed regions, from 4096 boundary
/// samples per curve and exact point-to-segment distances.
double hausdorff_distance(const PolarCurve& a, const PolarCurve& b, int samples = 4096);

/// sup over directions of |h_a - h_b| for the support functions, evaluated on
/// the grid. Equals the Hausdorff distance for convex regions.
double support_distance(const PolarCurve& a, const PolarCurve& b, int directions = 4096);

/// max|rho'| <= 2 sqrt(d) (1 + d)/(1 - d), d = max|rho - 1|. The curve must be
/// convex with 0 < rho < 2 and d < 1.
InequalityReport lemma_gradient_bound(const PolarCurve& curve, double tol = 1e-12);

/// |H_f(E_h) - H_f(B_r)| / d_H(E_h, B_r) per member (0 when the distance is
/// zero). Every member must be convex.
std::vector<double> stability_ratio(std::span<const PolarCurve> family, const WeightPair& wp,
                                    double r);

}  // namespace gausscurv
