#include "gausscurv/sphere.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "gausscurv/error.hpp"

namespace gausscurv {

double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

GaussRule gauss_gegenbauer(int points, double alpha) {
  if (points < 1) throw PreconditionError("gauss_gegenbauer: need at least one point");
  if (!(alpha > -1.0)) throw PreconditionError("gauss_gegenbauer: alpha must exceed -1");
  const double mu0 =
      std::sqrt(std::numbers::pi) * std::exp(std::lgamma(alpha + 1.0) - std::lgamma(alpha + 1.5));
  GaussRule rule;
  if (points == 1) {
    rule.nodes = {0.0};
    rule.weights = {mu0};
    return rule;
  }
  // Golub-Welsch on the symmetric Jacobi matrix of the weight (1-t^2)^alpha.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sub(points - 1);
  for (int k = 1; k < points; ++k) {
    const double kk = k;
    sub[k - 1] = std::sqrt(kk * (kk + 2.0 * alpha) / (4.0 * (kk + alpha) * (kk + alpha) - 1.0));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  rule.nodes.resize(points);
  rule.weights.resize(points);
  for (int j = 0; j < points; ++j) {
    rule.nodes[j] = solver.eigenvalues()[j];
    const double v = solver.eigenvectors()(0, j);
    rule.weights[j] = mu0 * v * v;
  }
  // Enforce the reflection symmetry of the weight exactly.
  for (int j = 0; j < points / 2; ++j) {
    const int k = points - 1 - j;
    const double t = 0.5 * (rule.nodes[k] - rule.nodes[j]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[j]);
    rule.nodes[j] = -t;
    rule.nodes[k] = t;
    rule.weights[j] = rule.weights[k] = w;
  }
  if (points % 2 == 1) rule.nodes[points / 2] = 0.0;
  return rule;
}

SphereQuadrature::SphereQuadrature(int n, int degree, bool zonal_only, std::vector<Vec> nodes,
                                   std::vector<double> weights)
    : n_(n), degree_(degree), zonal_(zonal_only), nodes_(std::move(nodes)),
      weights_(std::move(weights)) {
  if (nodes_.size() != weights_.size()) {
    throw PreconditionError("SphereQuadrature: node and weight counts differ");
  }
}

double SphereQuadrature::integrate(std::span<const double> values) const {
  if (values.size() != weights_.size()) {
    throw PreconditionError("SphereQuadrature::integrate: value count mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights_[i] * values[i];
  return sum;
}

double SphereQuadrature::integrate(const std::function<double(const Vec&)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
  return sum;
}

namespace {

constexpr std::size_t kMaxNodes = 4'000'000;

std::size_t product_rule_size(int n, int degree) {
  if (n == 2) return static_cast<std::size_t>(degree + 1);
  return static_cast<std::size_t>(degree / 2 + 1) * product_rule_size(n - 1, degree);
}

void product_rule(int n, int degree, std::vector<Vec>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  if (n == 2) {
    const int m = degree + 1;
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / m;
      Vec x(2);
      x << std::cos(phi), std::sin(phi);
      nodes.push_back(std::move(x));
      weights.push_back(2.0 * std::numbers::pi / m);
    }
    return;
  }
  std::vector<Vec> sub_nodes;
  std::vector<double> sub_weights;
  product_rule(n - 1, degree, sub_nodes, sub_weights);
  const auto polar = gauss_gegenbauer(degree / 2 + 1, 0.5 * (n - 3));
  nodes.reserve(polar.nodes.size() * sub_nodes.size());
  weights.reserve(polar.nodes.size() * sub_nodes.size());
  for (std::size_t j = 0; j < polar.nodes.size(); ++j) {
    const double t = polar.nodes[j];
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    for (std::size_t q = 0; q < sub_nodes.size(); ++q) {
      Vec x(n);
      x[0] = t;
      x.tail(n - 1) = s * sub_nodes[q];
      nodes.push_back(std::move(x));
      weights.push_back(polar.weights[j] * sub_weights[q]);
    }
  }
}

}  // namespace

SphereQuadrature build_quadrature(int n, int degree) {
  if (n < 2 || n > 8) throw PreconditionError("build_quadrature: n must be in [2, 8]");
  if (degree < 0 || degree > 64) {
    throw PreconditionError("build_quadrature: degree must be in [0, 64]");
  }
  if (product_rule_size(n, degree) > kMaxNodes) {
    throw PreconditionError("build_quadrature: unsupported (n, degree) = (" +
                            std::to_string(n) + ", " + std::to_string(degree) +
                            "), product rule too large");
  }
  std::vector<Vec> nodes;
  std::vector<double> weights;
  product_rule(n, degree, nodes, weights);
  return SphereQuadrature(n, degree, false, std::move(nodes), std::move(weights));
}

SphereQuadrature build_zonal_quadrature(int n, int degree) {
  if (n < 3 || n > 8) throw PreconditionError("build_zonal_quadrature: n must be in [3, 8]");
  if (degree < 0 || degree > 256) {
    throw PreconditionError("build_zonal_quadrature: degree must be in [0, 256]");
  }
  const auto polar = gauss_gegenbauer(degree / 2 + 1, 0.5 * (n - 3));
  const double ring = sphere_area(n - 1);
  std::vector<Vec> nodes;
  std::vector<double> weights;
  for (std::size_t j = 0; j < polar.nodes.size(); ++j) {
    const double t = polar.nodes[j];
    Vec x = Vec::Zero(n);
    x[0] = t;
    x[1] = std::sqrt(std::max(0.0, 1.0 - t * t));
    nodes.push_back(std::move(x));
    weights.push_back(polar.weights[j] * ring);
  }
  return SphereQuadrature(n, degree, true, std::move(nodes), std::move(weights));
}

int basis_size(Basis basis, int max_degree) {
  return basis == Basis::full ? (max_degree + 1) * (max_degree + 1) : max_degree + 1;
}

int modes_of_degree(Basis basis, int k) { return basis == Basis::full ? 2 * k + 1 : 1; }

int basis_index(Basis basis, int k, int i) {
  if (k < 0 || i < 1 || i > modes_of_degree(basis, k)) {
    throw PreconditionError("basis_index: no harmonic (" + std::to_string(k) + ", " +
                            std::to_string(i) + ")");
  }
  return basis == Basis::full ? k * k + i - 1 : k;
}

int basis_degree(Basis basis, int index) {
  if (basis == Basis::zonal) return index;
  return static_cast<int>(std::sqrt(static_cast<double>(index) + 0.5));
}

namespace {

/// Value and gradient in R^3.
struct Dual {
  double v = 0.0;
  std::array<double, 3> g{};
  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
};

Dual operator+(const Dual& a, const Dual& b) {
  Dual r(a.v + b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
  return r;
}
Dual operator-(const Dual& a, const Dual& b) {
  Dual r(a.v - b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] - b.g[i];
  return r;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r(a.v * b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  return r;
}
Dual operator*(double c, const Dual& a) {
  Dual r(c * a.v);
  for (int i = 0; i < 3; ++i) r.g[i] = c * a.g[i];
  return r;
}

/// Value, gradient and Hessian in R^3.
struct Jet {
  double v = 0.0;
  std::array<double, 3> g{};
  std::array<double, 9> h{};
  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT(google-explicit-constructor)
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r(a.v + b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] + b.g[i];
  for (int i = 0; i < 9; ++i) r.h[i] = a.h[i] + b.h[i];
  return r;
}
Jet operator-(const Jet& a, const Jet& b) {
  Jet r(a.v - b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.g[i] - b.g[i];
  for (int i = 0; i < 9; ++i) r.h[i] = a.h[i] - b.h[i];
  return r;
}
Jet operator*(const Jet& a, const Jet& b) {
  Jet r(a.v * b.v);
  for (int i = 0; i < 3; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.h[3 * i + j] =
          a.v * b.h[3 * i + j] + b.v * a.h[3 * i + j] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
  }
  return r;
}
Jet operator*(double c, const Jet& a) {
  Jet r(c * a.v);
  for (int i = 0; i < 3; ++i) r.g[i] = c * a.g[i];
  for (int i = 0; i < 9; ++i) r.h[i] = c * a.h[i];
  return r;
}

double full_normalisation(int l, int m) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                   std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0)));
}

/// Real orthonormal solid harmonics r^l Y_{l,m} as polynomials in (x, y, z),
/// stored at index l^2 + l + m.
template <typename T>
void solid_harmonics(const T& x, const T& y, const T& z, int max_degree, std::vector<T>& out) {
  out.assign(static_cast<std::size_t>((max_degree + 1) * (max_degree + 1)), T(0.0));
  const T r2 = x * x + y * y + z * z;
  const double sqrt2 = std::numbers::sqrt2;
  T re(1.0);
  T im(0.0);
  double diag = 1.0;  // (2m-1)!!
  for (int m = 0; m <= max_degree; ++m) {
    if (m > 0) {
      const T next = re * x - im * y;
      im = im * x + re * y;
      re = next;
      diag *= 2.0 * m - 1.0;
    }
    T p2(0.0);
    T p1(0.0);
    for (int l = m; l <= max_degree; ++l) {
      T p;
      if (l == m) {
        p = T(diag);
      } else if (l == m + 1) {
        p = (2.0 * m + 1.0) * (z * p1);
      } else {
        p = (1.0 / (l - m)) * ((2.0 * l - 1.0) * (z * p1) - (l + m - 1.0) * (r2 * p2));
      }
      const double c = full_normalisation(l, m);
      if (m == 0) {
        out[l * l + l] = c * p;
      } else {
        out[l * l + l + m] = (sqrt2 * c) * (p * re);
        out[l * l + l - m] = (sqrt2 * c) * (p * im);
      }
      p2 = p1;
      p1 = p;
    }
  }
}

/// Normalised Gegenbauer polynomials Z_k(t) on S^{n-1} with first and second
/// derivatives in t.
void zonal_polynomials(int n, int max_degree, double t, std::vector<double>& c,
                       std::vector<double>& d, std::vector<double>& e) {
  const double lambda = 0.5 * (n - 2);
  c.assign(max_degree + 1, 0.0);
  d.assign(max_degree + 1, 0.0);
  e.assign(max_degree + 1, 0.0);
  c[0] = 1.0;
  if (max_degree >= 1) {
    c[1] = 2.0 * lambda * t;
    d[1] = 2.0 * lambda;
  }
  for (int k = 2; k <= max_degree; ++k) {
    const double a = 2.0 * (k + lambda - 1.0);
    const double b = k + 2.0 * lambda - 2.0;
    c[k] = (a * t * c[k - 1] - b * c[k - 2]) / k;
    d[k] = (a * (c[k - 1] + t * d[k - 1]) - b * d[k - 2]) / k;
    e[k] = (a * (2.0 * d[k - 1] + t * e[k - 1]) - b * e[k - 2]) / k;
  }
  const double ring = sphere_area(n - 1);
  for (int k = 0; k <= max_degree; ++k) {
    const double log_h = std::log(std::numbers::pi) + (1.0 - 2.0 * lambda) * std::log(2.0) +
                         std::lgamma(k + 2.0 * lambda) - std::lgamma(k + 1.0) -
                         std::log(k + lambda) - 2.0 * std::lgamma(lambda);
    const double scale = 1.0 / std::sqrt(ring * std::exp(log_h));
    c[k] *= scale;
    d[k] *= scale;
    e[k] *= scale;
  }
}

void evaluate_full(int max_degree, const Vec& x, std::span<double> values,
                   std::span<double> gradients, std::span<double> hessians) {
  const int count = basis_size(Basis::full, max_degree);
  if (!hessians.empty()) {
    Jet jx(x[0]), jy(x[1]), jz(x[2]);
    jx.g[0] = jy.g[1] = jz.g[2] = 1.0;
    std::vector<Jet> out;
    solid_harmonics(jx, jy, jz, max_degree, out);
    for (int j = 0; j < count; ++j) {
      const int k = basis_degree(Basis::full, j);
      const Jet& p = out[j];
      values[j] = p.v;
      for (int a = 0; a < 3; ++a) {
        if (!gradients.empty()) gradients[3 * j + a] = p.g[a] - k * p.v * x[a];
        for (int b = 0; b < 3; ++b) {
          hessians[9 * j + 3 * a + b] =
              p.h[3 * a + b] - k * (p.g[a] * x[b] + x[a] * p.g[b]) -
              k * p.v * ((a == b ? 1.0 : 0.0) - (k + 2.0) * x[a] * x[b]);
        }
      }
    }
    return;
  }
  if (!gradients.empty()) {
    Dual dx(x[0]), dy(x[1]), dz(x[2]);
    dx.g[0] = dy.g[1] = dz.g[2] = 1.0;
    std::vector<Dual> out;
    solid_harmonics(dx, dy, dz, max_degree, out);
    for (int j = 0; j < count; ++j) {
      const int k = basis_degree(Basis::full, j);
      values[j] = out[j].v;
      for (int a = 0; a < 3; ++a) gradients[3 * j + a] = out[j].g[a] - k * out[j].v * x[a];
    }
    return;
  }
  std::vector<double> out;
  solid_harmonics(x[0], x[1], x[2], max_degree, out);
  for (int j = 0; j < count; ++j) values[j] = out[j];
}

void evaluate_zonal(int n, int max_degree, const Vec& x, std::span<double> values,
                    std::span<double> gradients, std::span<double> hessians) {
  const double t = x[0];
  std::vector<double> c, d, e;
  zonal_polynomials(n, max_degree, t, c, d, e);
  Vec dt = -t * x;
  dt[0] += 1.0;
  Mat ddt;
  if (!hessians.empty()) {
    ddt = -t * Mat::Identity(n, n) + 3.0 * t * x * x.transpose();
    ddt.row(0) -= x.transpose();
    ddt.col(0) -= x;
  }
  for (int k = 0; k <= max_degree; ++k) {
    values[k] = c[k];
    if (!gradients.empty()) {
      for (int a = 0; a < n; ++a) gradients[n * k + a] = d[k] * dt[a];
    }
    if (!hessians.empty()) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          hessians[n * n * k + n * a + b] = e[k] * dt[a] * dt[b] + d[k] * ddt(a, b);
        }
      }
    }
  }
}

}  // namespace

void evaluate_basis(int n, int max_degree, Basis basis, const Vec& x, std::span<double> values,
                    std::span<double> gradients, std::span<double> hessians) {
  const auto count = static_cast<std::size_t>(basis_size(basis, max_degree));
  if (x.size() != n) throw PreconditionError("evaluate_basis: point has wrong dimension");
  if (values.size() < count || (!gradients.empty() && gradients.size() < count * n) ||
      (!hessians.empty() && hessians.size() < count * n * n)) {
    throw PreconditionError("evaluate_basis: output buffer too small");
  }
  if (basis == Basis::full) {
    if (n != 3) throw PreconditionError("evaluate_basis: full basis requires n = 3");
    evaluate_full(max_degree, x, values, gradients, hessians);
  } else {
    if (n < 3) throw PreconditionError("evaluate_basis: zonal basis requires n >= 3");
    evaluate_zonal(n, max_degree, x, values, gradients, hessians);
  }
}

HarmonicField::HarmonicField(int n, int max_degree, Basis basis, std::vector<double> coeffs)
    : n_(n), max_degree_(max_degree), basis_(basis), coeffs_(std::move(coeffs)) {
  if (max_degree < 0) throw PreconditionError("HarmonicField: negative degree");
  if (basis == Basis::full && n != 3) {
    throw PreconditionError("HarmonicField: full basis requires n = 3");
  }
  if (basis == Basis::zonal && (n < 3 || n > 8)) {
    throw PreconditionError("HarmonicField: zonal basis requires 3 <= n <= 8");
  }
  if (coeffs_.size() != static_cast<std::size_t>(basis_size(basis, max_degree))) {
    throw PreconditionError("HarmonicField: coefficient count does not match the basis");
  }
}

HarmonicField HarmonicField::zero(int n, int max_degree, Basis basis) {
  return HarmonicField(n, max_degree, basis,
                       std::vector<double>(basis_size(basis, max_degree), 0.0));
}

HarmonicField HarmonicField::constant(int n, int max_degree, Basis basis, double value) {
  auto f = zero(n, max_degree, basis);
  f.coeffs_[0] = value * std::sqrt(sphere_area(n));
  return f;
}

HarmonicField HarmonicField::mode(int n, int max_degree, Basis basis, int k, int i,
                                  double amplitude) {
  if (k > max_degree) throw PreconditionError("HarmonicField::mode: degree above cap");
  auto f = zero(n, max_degree, basis);
  f.coeffs_[basis_index(basis, k, i)] = amplitude;
  return f;
}

Parity HarmonicField::parity() const {
  bool odd_zero = true;
  bool even_zero = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (coeffs_[j] == 0.0) continue;
    if (basis_degree(basis_, static_cast<int>(j)) % 2 == 0) {
      even_zero = false;
    } else {
      odd_zero = false;
    }
  }
  if (odd_zero) return Parity::even;
  if (even_zero) return Parity::odd;
  return Parity::none;
}

double HarmonicField::value(const Vec& x) const {
  std::vector<double> v(coeffs_.size());
  evaluate_basis(n_, max_degree_, basis_, x, v);
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += coeffs_[j] * v[j];
  return s;
}

Vec HarmonicField::gradient(const Vec& x) const {
  std::vector<double> v(coeffs_.size());
  std::vector<double> g(coeffs_.size() * n_);
  evaluate_basis(n_, max_degree_, basis_, x, v, g);
  Vec out = Vec::Zero(n_);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    for (int a = 0; a < n_; ++a) out[a] += coeffs_[j] * g[j * n_ + a];
  }
  return out;
}

Mat HarmonicField::hessian(const Vec& x) const {
  std::vector<double> v(coeffs_.size());
  std::vector<double> g(coeffs_.size() * n_);
  std::vector<double> h(coeffs_.size() * n_ * n_);
  evaluate_basis(n_, max_degree_, basis_, x, v, g, h);
  Mat out = Mat::Zero(n_, n_);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) out(a, b) += coeffs_[j] * h[(j * n_ + a) * n_ + b];
    }
  }
  return out;
}

double HarmonicField::l2_norm_squared() const {
  double s = 0.0;
  for (double a : coeffs_) s += a * a;
  return s;
}

double HarmonicField::gradient_norm_squared() const {
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = basis_degree(basis_, static_cast<int>(j));
    s += k * (k + n_ - 2.0) * coeffs_[j] * coeffs_[j];
  }
  return s;
}

double HarmonicField::integral() const { return coeffs_[0] * std::sqrt(sphere_area(n_)); }

double HarmonicField::smallness_bound() const {
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const int k = basis_degree(basis_, static_cast<int>(j));
    s += std::abs(coeffs_[j]) * (1.0 + k * (k + n_ - 2.0));
  }
  return s;
}

HarmonicField HarmonicField::scaled(double factor) const {
  auto c = coeffs_;
  for (auto& a : c) a *= factor;
  return HarmonicField(n_, max_degree_, basis_, std::move(c));
}

HarmonicField HarmonicField::plus(const HarmonicField& other) const {
  if (other.n_ != n_ || other.basis_ != basis_) {
    throw PreconditionError("HarmonicField::plus: incompatible fields");
  }
  const int degree = std::max(max_degree_, other.max_degree_);
  auto a = with_degree(degree);
  const auto b = other.with_degree(degree);
  for (std::size_t j = 0; j < a.coeffs_.size(); ++j) a.coeffs_[j] += b.coeffs_[j];
  return a;
}

HarmonicField HarmonicField::with_degree(int max_degree) const {
  auto c = coeffs_;
  c.resize(basis_size(basis_, max_degree), 0.0);
  return HarmonicField(n_, max_degree, basis_, std::move(c));
}

HarmonicField HarmonicField::even_part() const {
  auto c = coeffs_;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (basis_degree(basis_, static_cast<int>(j)) % 2 == 1) c[j] = 0.0;
  }
  return HarmonicField(n_, max_degree_, basis_, std::move(c));
}

HarmonicField laplace_beltrami(const HarmonicField& field) {
  std::vector<double> c(field.coeffs().begin(), field.coeffs().end());
  const int n = field.dimension();
  for (std::size_t j = 0; j < c.size(); ++j) {
    const int k = basis_degree(field.basis(), static_cast<int>(j));
    c[j] *= -k * (k + n - 2.0);
  }
  return HarmonicField(n, field.max_degree(), field.basis(), std::move(c));
}

Vec tangential_gradient(const HarmonicField& field, const Vec& x) { return field.gradient(x); }

double tangential_hessian_form(const HarmonicField& field, const Vec& x) {
  const auto grid =
      SphericalGrid::shared(field.dimension(), std::max(field.max_degree(), 1), field.basis());
  const auto form = grid->hessian_form(field);
  const Vec g = field.gradient(x);
  return 0.5 * form.grad_squared.gradient(x).dot(g);
}

double tangential_hessian_form_direct(const HarmonicField& field, const Vec& x) {
  const Vec g = field.gradient(x);
  return g.dot(field.hessian(x) * g);
}

std::shared_ptr<const SphericalGrid> SphericalGrid::shared(int n, int max_degree, Basis basis) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, Basis>, std::shared_ptr<const SphericalGrid>> cache;
  const std::lock_guard lock(mutex);
  auto& slot = cache[{n, max_degree, basis}];
  if (!slot) slot = std::make_shared<const SphericalGrid>(n, max_degree, basis);
  return slot;
}

namespace {

SphereQuadrature grid_quadrature(int n, int max_degree, Basis basis) {
  if (max_degree < 1) throw PreconditionError("SphericalGrid: degree must be >= 1");
  if (basis == Basis::full) {
    if (n != 3) throw PreconditionError("SphericalGrid: full basis requires n = 3");
    if (4 * max_degree > 64) {
      throw PreconditionError("SphericalGrid: full basis degree capped at 16");
    }
    return build_quadrature(3, 4 * max_degree);
  }
  if (4 * max_degree > 256) {
    throw PreconditionError("SphericalGrid: zonal basis degree capped at 64");
  }
  return build_zonal_quadrature(n, 4 * max_degree);
}

}  // namespace

SphericalGrid::SphericalGrid(int n, int max_degree, Basis basis)
    : n_(n), max_degree_(max_degree), basis_(basis),
      quad_(grid_quadrature(n, max_degree, basis)),
      table_size_(basis_size(basis, 2 * max_degree)) {
  const std::size_t nodes = quad_.size();
  values_.resize(nodes * table_size_);
  grads_.resize(nodes * table_size_ * n_);
  for (std::size_t i = 0; i < nodes; ++i) {
    evaluate_basis(n_, 2 * max_degree_, basis_, quad_.nodes()[i],
                   std::span(values_).subspan(i * table_size_, table_size_),
                   std::span(grads_).subspan(i * table_size_ * n_, table_size_ * n_));
  }
}

void SphericalGrid::check_field(const HarmonicField& field) const {
  if (field.dimension() != n_ || field.basis() != basis_ || field.max_degree() > 2 * max_degree_) {
    throw PreconditionError("SphericalGrid: field incompatible with the grid");
  }
}

std::vector<double> SphericalGrid::synthesize(const HarmonicField& field) const {
  check_field(field);
  const auto c = field.coeffs();
  std::vector<double> out(quad_.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double* row = &values_[i * table_size_];
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * row[j];
    out[i] = s;
  }
  return out;
}

std::vector<double> SphericalGrid::synthesize_gradient(const HarmonicField& field) const {
  check_field(field);
  const auto c = field.coeffs();
  std::vector<double> out(quad_.size() * n_, 0.0);
  for (std::size_t i = 0; i < quad_.size(); ++i) {
    const double* row = &grads_[i * table_size_ * n_];
    double* dst = &out[i * n_];
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] == 0.0) continue;
      for (int a = 0; a < n_; ++a) dst[a] += c[j] * row[j * n_ + a];
    }
  }
  return out;
}

HarmonicField SphericalGrid::analyze(std::span<const double> values, int degree) const {
  if (values.size() != quad_.size()) {
    throw PreconditionError("SphericalGrid::analyze: value count mismatch");
  }
  if (degree < 0 || degree > 2 * max_degree_) {
    throw PreconditionError("SphericalGrid::analyze: degree above the tabulated range");
  }
  const auto count = static_cast<std::size_t>(basis_size(basis_, degree));
  std::vector<double> c(count, 0.0);
  for (std::size_t i = 0; i < quad_.size(); ++i) {
    const double wv = quad_.weights()[i] * values[i];
    const double* row = &values_[i * table_size_];
    for (std::size_t j = 0; j < count; ++j) c[j] += wv * row[j];
  }
  return HarmonicField(n_, degree, basis_, std::move(c));
}

HarmonicField SphericalGrid::project(const std::function<double(const Vec&)>& f,
                                     int degree) const {
  std::vector<double> values(quad_.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(quad_.nodes()[i]);
  return analyze(values, degree);
}

SphericalGrid::HessianForm SphericalGrid::hessian_form(const HarmonicField& field) const {
  check_field(field);
  if (field.max_degree() > max_degree_) {
    throw PreconditionError("SphericalGrid::hessian_form: field degree exceeds grid headroom");
  }
  const std::size_t nodes = quad_.size();
  const auto grad = synthesize_gradient(field);
  std::vector<double> sq(nodes);
  double scale = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    double s = 0.0;
    for (int a = 0; a < n_; ++a) s += grad[i * n_ + a] * grad[i * n_ + a];
    sq[i] = s;
    scale = std::max(scale, s);
  }
  HessianForm out{{}, analyze(sq, 2 * field.max_degree()), 0.0};
  const auto back = synthesize(out.grad_squared);
  for (std::size_t i = 0; i < nodes; ++i) {
    out.residual = std::max(out.residual, std::abs(back[i] - sq[i]));
  }
  if (scale > 0.0) out.residual /= scale;
  if (out.residual > 1e-6) {
    throw NumericalError("hessian_form: projection residual " + std::to_string(out.residual) +
                         " exceeds 1e-6");
  }
  const auto dsq = synthesize_gradient(out.grad_squared);
  out.values.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    double s = 0.0;
    for (int a = 0; a < n_; ++a) s += dsq[i * n_ + a] * grad[i * n_ + a];
    out.values[i] = 0.5 * s;
  }
  return out;
}

}  // namespace gausscurv
