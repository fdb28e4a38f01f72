#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gausscurv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Gauss rule on [-1, 1] for the weight (1 - t^2)^alpha.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_gegenbauer(int points, double alpha);

/// Nodes and positive weights on S^{n-1}.
class SphereQuadrature {
 public:
  SphereQuadrature(int n, int degree, bool zonal_only, std::vector<Vec> nodes,
                   std::vector<double> weights);

  int dimension() const { return n_; }
  /// Maximal polynomial degree integrated exactly (for zonal rules: exactly
  /// for zonal polynomials only).
  int degree() const { return degree_; }
  bool zonal_only() const { return zonal_; }
  std::size_t size() const { return weights_.size(); }
  const std::vector<Vec>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  double integrate(std::span<const double> values) const;
  double integrate(const std::function<double(const Vec&)>& f) const;

 private:
  int n_;
  int degree_;
  bool zonal_;
  std::vector<Vec> nodes_;
  std::vector<double> weights_;
};

/// Product rule on S^{n-1}: uniform for n = 2, Gauss-Legendre in the polar
/// cosine times uniform azimuth for n = 3, and for n >= 4 the recursive
/// polar-angle chain with Gauss-Gegenbauer weights. n in [2, 8], degree in
/// [0, 64]; throws PreconditionError when the rule would exceed 4e6 nodes.
SphereQuadrature build_quadrature(int n, int degree);

/// One-dimensional rule for functions of t = <x, e_1> on S^{n-1}, n >= 3.
/// Nodes are placed at (t, sqrt(1 - t^2), 0, ...). degree in [0, 256].
SphereQuadrature build_zonal_quadrature(int n, int degree);

enum class Basis {
  full,   ///< all real spherical harmonics, n = 3 only
  zonal,  ///< normalised Gegenbauer polynomials in <x, e_1>, any n >= 3
};

enum class Parity { none, even, odd };

/// Number of basis functions of degree <= max_degree.
int basis_size(Basis basis, int max_degree);
/// Number of basis functions of exact degree k.
int modes_of_degree(Basis basis, int k);
/// Flat index of y_{k,i}, i = 1..modes_of_degree(k). For the full basis
/// i = m + k + 1 with m the azimuthal order (i = 1 is the sin(k phi) sectoral
/// harmonic, i = k + 1 the zonal one about e_3).
int basis_index(Basis basis, int k, int i);
/// Degree k of the basis function at a flat index.
int basis_degree(Basis basis, int index);

/// L^2-normalised basis functions evaluated at a unit vector x: values, and
/// optionally tangential gradients (n per function) and Euclidean Hessians of
/// the degree-0 homogeneous extension (n*n per function, row-major).
void evaluate_basis(int n, int max_degree, Basis basis, const Vec& x, std::span<double> values,
                    std::span<double> gradients = {}, std::span<double> hessians = {});

/// u = sum_{k,i} a_{k,i} y_{k,i}.
class HarmonicField {
 public:
  HarmonicField(int n, int max_degree, Basis basis, std::vector<double> coeffs);

  static HarmonicField zero(int n, int max_degree, Basis basis);
  static HarmonicField constant(int n, int max_degree, Basis basis, double value);
  static HarmonicField mode(int n, int max_degree, Basis basis, int k, int i,
                            double amplitude = 1.0);

  int dimension() const { return n_; }
  int max_degree() const { return max_degree_; }
  Basis basis() const { return basis_; }
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(int k, int i) const { return coeffs_[basis_index(basis_, k, i)]; }
  /// Even when every odd-degree coefficient vanishes, odd when every
  /// even-degree one does.
  Parity parity() const;

  double value(const Vec& x) const;
  /// Tangential gradient; orthogonal to x.
  Vec gradient(const Vec& x) const;
  /// Euclidean Hessian of the degree-0 homogeneous extension at unit x.
  Mat hessian(const Vec& x) const;

  /// ||u||^2 and ||grad u||^2 over the sphere, from the coefficients.
  double l2_norm_squared() const;
  double gradient_norm_squared() const;
  /// int u dsigma.
  double integral() const;
  /// sum |a_{k,i}| (1 + k(k+n-2)): a crude bound for the W^{2,inf} size.
  double smallness_bound() const;

  HarmonicField scaled(double factor) const;
  HarmonicField plus(const HarmonicField& other) const;
  HarmonicField with_degree(int max_degree) const;
  /// Copy with every odd-degree coefficient set to zero.
  HarmonicField even_part() const;

 private:
  int n_;
  int max_degree_;
  Basis basis_;
  std::vector<double> coeffs_;
};

/// a_{k,i} -> -k(k+n-2) a_{k,i}.
HarmonicField laplace_beltrami(const HarmonicField& field);

Vec tangential_gradient(const HarmonicField& field, const Vec& x);

/// (1/2) <grad |grad h|^2, grad h> at x, obtained by projecting |grad h|^2
/// onto the basis of degree 2L and differentiating the projection. Throws
/// NumericalError when the projection residual exceeds 1e-6.
double tangential_hessian_form(const HarmonicField& field, const Vec& x);

/// The same form from the Hessian of the homogeneous extension,
/// <D^2 h grad h, grad h>.
double tangential_hessian_form_direct(const HarmonicField& field, const Vec& x);

/// A quadrature of degree 4L with the basis of degree 2L tabulated at its
/// nodes. Shared and immutable once built.
class SphericalGrid {
 public:
  /// Builds (or reuses) the grid for fields of degree <= max_degree. The full
  /// basis is capped at max_degree 16 by the degree-64 quadrature.
  static std::shared_ptr<const SphericalGrid> shared(int n, int max_degree, Basis basis);

  SphericalGrid(int n, int max_degree, Basis basis);

  int dimension() const { return n_; }
  int max_degree() const { return max_degree_; }
  Basis basis() const { return basis_; }
  const SphereQuadrature& quadrature() const { return quad_; }
  std::size_t size() const { return quad_.size(); }

  std::vector<double> synthesize(const HarmonicField& field) const;
  /// Tangential gradients at the nodes, n doubles per node.
  std::vector<double> synthesize_gradient(const HarmonicField& field) const;
  /// Coefficients of degree <= degree (<= 2L) from values at the nodes.
  HarmonicField analyze(std::span<const double> values, int degree) const;
  HarmonicField project(const std::function<double(const Vec&)>& f, int degree) const;

  struct HessianForm {
    std::vector<double> values;   ///< (1/2)<grad|grad h|^2, grad h> per node
    HarmonicField grad_squared;   ///< projection of |grad h|^2, degree 2L
    double residual = 0.0;        ///< max relative projection residual
  };
  HessianForm hessian_form(const HarmonicField& field) const;

 private:
  void check_field(const HarmonicField& field) const;

  int n_;
  int max_degree_;
  Basis basis_;
  SphereQuadrature quad_;
  int table_size_;              // basis size at degree 2L
  std::vector<double> values_;  // node-major
  std::vector<double> grads_;   // node-major, n per function
};

}  // namespace gausscurv
