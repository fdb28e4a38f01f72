#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "gausscurv/numerics.hpp"
#include "gausscurv/sphere.hpp"

namespace gausscurv {

/// Star-shaped body E = {t x h(x) : x in S^{n-1}, 0 <= t < 1} with
/// h = r (1 + u).
///
/// Node-level geometry (h, grad h, Laplacian, Hessian form, mean curvature)
/// is computed once at construction on a shared quadrature grid of degree
/// 4L, where L is the grid degree (at least the degree of u).
class RadialGraph {
 public:
  /// grid_degree = 0 picks max(deg u, 1). symmetric = true asserts E = -E and
  /// requires u to be even. Throws PreconditionError when h <= 0 at a node.
  RadialGraph(double radius, HarmonicField u, int grid_degree = 0, bool symmetric = false);

  /// Ball of radius r in R^n; the basis defaults to full for n = 3 and zonal
  /// otherwise.
  static RadialGraph ball(int n, double radius, int grid_degree = 1);
  static RadialGraph ball(int n, double radius, Basis basis, int grid_degree);

  int dimension() const { return u_.dimension(); }
  double radius() const { return radius_; }
  const HarmonicField& perturbation() const { return u_; }
  const SphericalGrid& grid() const { return *grid_; }
  bool symmetric() const { return symmetric_; }
  /// Coefficient bound sum |a_{k,i}| (1 + k(k+n-2)) on the W^{2,inf} size of u.
  double epsilon() const { return u_.smallness_bound(); }

  /// h at a unit vector.
  double h(const Vec& x) const;
  /// Per-node values.
  const std::vector<double>& node_h() const { return h_; }
  const std::vector<double>& node_grad_squared() const { return grad_sq_; }
  const std::vector<double>& node_curvature() const { return curvature_; }

  /// Mean curvature (sum of principal curvatures) at x h(x).
  double mean_curvature(const Vec& x) const;
  /// Mean curvature at the i-th grid node.
  double mean_curvature_at_node(std::size_t i) const { return curvature_[i]; }

  /// Principal curvatures at x h(x) from the second fundamental form of the
  /// level set |y| - h(y/|y|) = 0, in ascending order.
  std::vector<double> principal_curvatures(const Vec& x) const;
  /// Minimum principal curvature over the grid nodes.
  double convexity_margin() const;
  bool is_convex(double tol = 1e-10) const { return convexity_margin() >= -tol; }

  /// Same body dilated by factor s.
  RadialGraph dilated(double s) const;

 private:
  double radius_;
  HarmonicField u_;
  bool symmetric_;
  std::shared_ptr<const SphericalGrid> grid_;
  HarmonicField grad_squared_;  // projection of |grad u|^2
  HarmonicField laplacian_;
  std::vector<double> h_;
  std::vector<double> grad_sq_;   // |grad h|^2 per node
  std::vector<double> curvature_;
};

/// Mean curvature of the radial graph from h, |grad h|^2, the Laplacian of h
/// and (1/2)<grad|grad h|^2, grad h>.
double radial_mean_curvature(int n, double h, double grad_sq, double laplacian, double form);

/// gamma(E) = (2 pi)^{-n/2} int_E e^{-|x|^2/2} dx.
Estimate gaussian_volume(const RadialGraph& body);

/// int_{dE} H e^{-|x|^2/2}.
Estimate curvature_energy_nd(const RadialGraph& body);

/// int_{dE} (<x, nu>/|x|) H e^{-|x|^2/2}.
Estimate flux_energy(const RadialGraph& body);

struct InverseSquareFlux {
  Estimate boundary;  ///< int_{dE} <x, nu>/|x|^2 e^{-|x|^2/2}
  Estimate bulk;      ///< int_E (n-2)/|x|^2 e^{-|x|^2/2} - (2 pi)^{n/2} gamma(E)
};
InverseSquareFlux inverse_square_flux(const RadialGraph& body);

/// min over nodes of h.
double inscribed_radius(const RadialGraph& body);

struct BodyIntegrals {
  double gaussian_volume = 0.0;
  double energy = 0.0;
  double flux_energy = 0.0;
  double inverse_square_flux = 0.0;
  double inscribed_radius = 0.0;
};
BodyIntegrals body_integrals(const RadialGraph& body);

/// Dilate so that gaussian_volume equals target. Throws PreconditionError for
/// target outside (0, 1) and NumericalError when no bracket is found.
RadialGraph volume_match(const RadialGraph& body, double target);

/// gamma(B_r) in R^n.
double ball_gaussian_volume(int n, double r);
/// r with gamma(B_r) = volume.
double ball_radius_for_volume(int n, double volume);
/// (n-1) r^{n-2} e^{-r^2/2} |S^{n-1}|.
double ball_energy(int n, double r);
/// |S^{n-1}| r^{n-2} e^{-r^2/2}.
double ball_inverse_square_flux(int n, double r);

/// Text format: "n L parity", then "basis radius", then the coefficients.
void write_body(std::ostream& out, const RadialGraph& body);
RadialGraph read_body(std::istream& in);

}  // namespace gausscurv
