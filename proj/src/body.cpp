#include "gausscurv/body.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "gausscurv/error.hpp"
#include "gausscurv/weights.hpp"

namespace gausscurv {

namespace {

int pick_grid_degree(const HarmonicField& u, int requested) {
  const int degree = requested > 0 ? requested : std::max(u.max_degree(), 1);
  if (u.max_degree() > degree) {
    throw PreconditionError("RadialGraph: grid degree below the field degree");
  }
  return degree;
}

/// Quadrature over the grid nodes with an error estimate from the energy of
/// the top quarter of the degree-2L spectrum plus accumulated rounding.
Estimate node_integral(const SphericalGrid& grid, const std::vector<double>& values) {
  const auto& quad = grid.quadrature();
  Estimate out;
  double mass = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.value += quad.weights()[i] * values[i];
    mass += quad.weights()[i] * std::abs(values[i]);
  }
  const int top = 2 * grid.max_degree();
  const auto spectrum = grid.analyze(values, top);
  const auto coeffs = spectrum.coeffs();
  double tail = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (4 * basis_degree(grid.basis(), static_cast<int>(j)) > 3 * top) {
      tail += coeffs[j] * coeffs[j];
    }
  }
  out.error = std::sqrt(tail * sphere_area(grid.dimension())) +
              64.0 * std::numeric_limits<double>::epsilon() * mass;
  return out;
}

double gaussian_normaliser(int n) { return std::pow(2.0 * std::numbers::pi, 0.5 * n); }

}  // namespace

RadialGraph::RadialGraph(double radius, HarmonicField u, int grid_degree, bool symmetric)
    : radius_(radius),
      u_(std::move(u)),
      symmetric_(symmetric),
      grid_(SphericalGrid::shared(u_.dimension(), pick_grid_degree(u_, grid_degree), u_.basis())),
      grad_squared_(HarmonicField::zero(u_.dimension(), 0, u_.basis())),
      laplacian_(laplace_beltrami(u_)) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw PreconditionError("RadialGraph: radius must be positive");
  }
  if (symmetric_ && u_.parity() != Parity::even) {
    throw PreconditionError("RadialGraph: a symmetric body needs an even perturbation");
  }
  const int n = u_.dimension();
  auto form = grid_->hessian_form(u_);
  grad_squared_ = form.grad_squared;
  const auto values = grid_->synthesize(u_);
  const auto lap = grid_->synthesize(laplacian_);
  const auto grads = grid_->synthesize_gradient(u_);
  const std::size_t nodes = grid_->size();
  h_.resize(nodes);
  grad_sq_.resize(nodes);
  curvature_.resize(nodes);
  const double r = radius_;
  for (std::size_t i = 0; i < nodes; ++i) {
    double g = 0.0;
    for (int a = 0; a < n; ++a) g += grads[i * n + a] * grads[i * n + a];
    const double hi = r * (1.0 + values[i]);
    if (!(hi > 0.0)) throw PreconditionError("RadialGraph: h must be positive at every node");
    h_[i] = hi;
    grad_sq_[i] = r * r * g;
    curvature_[i] =
        radial_mean_curvature(n, hi, r * r * g, r * lap[i], r * r * r * form.values[i]);
  }
}

RadialGraph RadialGraph::ball(int n, double radius, int grid_degree) {
  return ball(n, radius, n == 3 ? Basis::full : Basis::zonal, grid_degree);
}

RadialGraph RadialGraph::ball(int n, double radius, Basis basis, int grid_degree) {
  return RadialGraph(radius, HarmonicField::zero(n, 0, basis), grid_degree, true);
}

double RadialGraph::h(const Vec& x) const { return radius_ * (1.0 + u_.value(x)); }

double RadialGraph::mean_curvature(const Vec& x) const {
  const double r = radius_;
  const Vec g = u_.gradient(x);
  const double form = 0.5 * grad_squared_.gradient(x).dot(g);
  return radial_mean_curvature(u_.dimension(), h(x), r * r * g.squaredNorm(),
                               r * laplacian_.value(x), r * r * r * form);
}

std::vector<double> RadialGraph::principal_curvatures(const Vec& x) const {
  const int n = u_.dimension();
  const double hx = h(x);
  const Vec g = radius_ * u_.gradient(x);
  const Mat d2 = radius_ * u_.hessian(x);
  // Level set phi(y) = |y| - h(y / |y|) at y = x h(x).
  const Vec dphi = x - g / hx;
  const Mat ddphi = (Mat::Identity(n, n) - x * x.transpose()) / hx - d2 / (hx * hx);
  const double norm = dphi.norm();
  const Vec nu = dphi / norm;
  const Eigen::HouseholderQR<Mat> qr(nu);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  const Mat tangent = q.rightCols(n - 1);
  const Mat shape = tangent.transpose() * ddphi * tangent / norm;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (shape + shape.transpose()),
                                               Eigen::EigenvaluesOnly);
  const Vec ev = eig.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double RadialGraph::convexity_margin() const {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& x : grid_->quadrature().nodes()) {
    margin = std::min(margin, principal_curvatures(x).front());
  }
  return margin;
}

RadialGraph RadialGraph::dilated(double s) const {
  if (!(s > 0.0)) throw PreconditionError("RadialGraph::dilated: factor must be positive");
  RadialGraph out = *this;
  out.radius_ *= s;
  for (auto& v : out.h_) v *= s;
  for (auto& v : out.grad_sq_) v *= s * s;
  for (auto& v : out.curvature_) v /= s;
  return out;
}

double radial_mean_curvature(int n, double h, double grad_sq, double laplacian, double form) {
  const double s = std::sqrt(grad_sq + h * h);
  return (-laplacian / h + (n - 1.0)) / s + (h * form + h * h * grad_sq) / (h * h * s * s * s);
}

Estimate gaussian_volume(const RadialGraph& body) {
  const int n = body.dimension();
  const auto& h = body.node_h();
  std::vector<double> values(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) values[i] = gaussian_radial_integral(n, h[i]);
  auto est = node_integral(body.grid(), values);
  const double c = gaussian_normaliser(n);
  return {est.value / c, est.error / c};
}

namespace {

Estimate surface_energy(const RadialGraph& body, bool flux) {
  const int n = body.dimension();
  const auto& h = body.node_h();
  const auto& curv = body.node_curvature();
  const auto& grad_sq = body.node_grad_squared();
  std::vector<double> values(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double g = grad_sq[i];
    const double hi = h[i];
    const double weight = std::exp(-0.5 * hi * hi) * std::pow(hi, n - 2);
    values[i] = curv[i] * weight * (flux ? hi : std::sqrt(hi * hi + g));
  }
  return node_integral(body.grid(), values);
}

}  // namespace

Estimate curvature_energy_nd(const RadialGraph& body) { return surface_energy(body, false); }

Estimate flux_energy(const RadialGraph& body) { return surface_energy(body, true); }

InverseSquareFlux inverse_square_flux(const RadialGraph& body) {
  const int n = body.dimension();
  const auto& h = body.node_h();
  if (*std::min_element(h.begin(), h.end()) <= 0.0) {
    throw PreconditionError("inverse_square_flux: body must contain the origin");
  }
  std::vector<double> boundary(h.size());
  std::vector<double> bulk(h.size());
  double bulk_error = 0.0;
  const auto& weights = body.grid().quadrature().weights();
  for (std::size_t i = 0; i < h.size(); ++i) {
    boundary[i] = std::pow(h[i], n - 2) * std::exp(-0.5 * h[i] * h[i]);
    const auto inner = integrate(
        [n](double t) {
          return ((n - 2.0) * std::pow(t, n - 3) - std::pow(t, n - 1)) * std::exp(-0.5 * t * t);
        },
        0.0, h[i]);
    bulk[i] = inner.value;
    bulk_error += weights[i] * inner.error;
  }
  InverseSquareFlux out;
  out.boundary = node_integral(body.grid(), boundary);
  out.bulk = node_integral(body.grid(), bulk);
  out.bulk.error += bulk_error;
  return out;
}

double inscribed_radius(const RadialGraph& body) {
  const auto& h = body.node_h();
  return *std::min_element(h.begin(), h.end());
}

BodyIntegrals body_integrals(const RadialGraph& body) {
  BodyIntegrals out;
  out.gaussian_volume = gaussian_volume(body).value;
  out.energy = curvature_energy_nd(body).value;
  out.flux_energy = flux_energy(body).value;
  out.inverse_square_flux = inverse_square_flux(body).boundary.value;
  out.inscribed_radius = inscribed_radius(body);
  return out;
}

RadialGraph volume_match(const RadialGraph& body, double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw PreconditionError("volume_match: target must lie in (0, 1)");
  }
  const int n = body.dimension();
  const auto& h = body.node_h();
  const auto& weights = body.grid().quadrature().weights();
  const double c = gaussian_normaliser(n);
  const auto gap = [&](double s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      sum += weights[i] * gaussian_radial_integral(n, s * h[i]);
    }
    return sum / c - target;
  };
  double lo = 1.0;
  double hi = 1.0;
  double glo = gap(lo);
  if (glo == 0.0) return body;
  for (int i = 0; i < 200 && glo > 0.0; ++i) glo = gap(lo *= 0.5);
  double ghi = gap(hi);
  for (int i = 0; i < 200 && ghi < 0.0; ++i) ghi = gap(hi *= 2.0);
  if (glo > 0.0 || ghi < 0.0) {
    throw NumericalError("volume_match: could not bracket the dilation factor");
  }
  if (glo == 0.0) return body.dilated(lo);
  if (ghi == 0.0) return body.dilated(hi);
  return body.dilated(find_root(gap, lo, hi));
}

double ball_gaussian_volume(int n, double r) {
  return boost::math::gamma_p(0.5 * n, 0.5 * r * r);
}

double ball_radius_for_volume(int n, double volume) {
  if (!(volume > 0.0 && volume < 1.0)) {
    throw PreconditionError("ball_radius_for_volume: volume must lie in (0, 1)");
  }
  return std::sqrt(2.0 * boost::math::gamma_p_inv(0.5 * n, volume));
}

double ball_energy(int n, double r) {
  return (n - 1.0) * ball_inverse_square_flux(n, r);
}

double ball_inverse_square_flux(int n, double r) {
  return sphere_area(n) * std::pow(r, n - 2) * std::exp(-0.5 * r * r);
}

void write_body(std::ostream& out, const RadialGraph& body) {
  const auto& u = body.perturbation();
  const char* parity = body.symmetric() ? "even" : "none";
  if (!body.symmetric() && u.parity() == Parity::odd) parity = "odd";
  out << u.dimension() << ' ' << u.max_degree() << ' ' << parity << '\n';
  out << (u.basis() == Basis::full ? "full" : "zonal") << ' ' << std::setprecision(17)
      << body.radius() << '\n';
  const auto c = u.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j) out << (j ? " " : "") << c[j];
  out << '\n';
}

RadialGraph read_body(std::istream& in) {
  int n = 0;
  int degree = -1;
  std::string parity;
  std::string basis_name;
  double radius = 0.0;
  if (!(in >> n >> degree >> parity >> basis_name >> radius)) {
    throw PreconditionError("read_body: malformed header");
  }
  if (parity != "even" && parity != "odd" && parity != "none") {
    throw PreconditionError("read_body: unknown parity '" + parity + "'");
  }
  if (basis_name != "full" && basis_name != "zonal") {
    throw PreconditionError("read_body: unknown basis '" + basis_name + "'");
  }
  if (degree < 0 || degree > 64) throw PreconditionError("read_body: degree out of range");
  const Basis basis = basis_name == "full" ? Basis::full : Basis::zonal;
  std::vector<double> coeffs(basis_size(basis, degree));
  for (auto& c : coeffs) {
    if (!(in >> c)) throw PreconditionError("read_body: too few coefficients");
  }
  HarmonicField u(n, degree, basis, std::move(coeffs));
  if (parity == "odd" && u.parity() != Parity::odd) {
    throw PreconditionError("read_body: coefficients are not odd");
  }
  return RadialGraph(radius, std::move(u), 0, parity == "even");
}

}  // namespace gausscurv
