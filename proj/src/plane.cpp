#include "gausscurv/plane.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "gausscurv/error.hpp"

namespace gausscurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct PolarSample {
  double rho;
  double d1;
  double d2;
};

PolarSample evaluate(std::span<const double> cs, std::span<const double> ss, double theta) {
  // e^{ik theta} by repeated rotation.
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double ck = 1.0;
  double sk = 0.0;
  PolarSample out{cs[0], 0.0, 0.0};
  for (std::size_t k = 1; k < cs.size(); ++k) {
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
    const double kk = static_cast<double>(k);
    const double a = cs[k];
    const double b = ss[k - 1];
    out.rho += a * ck + b * sk;
    out.d1 += kk * (b * ck - a * sk);
    out.d2 -= kk * kk * (a * ck + b * sk);
  }
  return out;
}

/// Periodic trapezoid on the cached grid plus the half-grid comparison.
template <typename F>
Estimate periodic_integral(int n, F&& integrand) {
  double full = 0.0;
  double half = 0.0;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = integrand(i);
    full += g;
    mass += std::abs(g);
    if (i % 2 == 0) half += g;
  }
  const double h = kTwoPi / n;
  const double value = full * h;
  const double coarse = half * 2.0 * h;
  return {value, std::abs(value - coarse) + 64.0 * kEps * mass * h};
}

double point_segment_distance(double px, double py, double ax, double ay, double bx,
                                       double by) {
  const double ex = bx - ax;
  const double ey = by - ay;
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0.0 ? ((px - ax) * ex + (py - ay) * ey) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = px - (ax + t * ex);
  const double dy = py - (ay + t * ey);
  return std::hypot(dx, dy);
}

}  // namespace

PolarCurve::PolarCurve(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs, int grid)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
  if (cos_.empty() || cos_.size() != sin_.size() + 1) {
    throw PreconditionError("PolarCurve: need K+1 cosine and K sine coefficients");
  }
  const int k = degree();
  if (grid < 8 || grid % 2 != 0 || grid < 4 * k) {
    throw PreconditionError("PolarCurve: grid must be even, >= 8 and >= 4K");
  }
  rho_.resize(grid);
  d1_.resize(grid);
  d2_.resize(grid);
  for (int i = 0; i < grid; ++i) {
    const auto s = evaluate(cos_, sin_, kTwoPi * i / grid);
    rho_[i] = s.rho;
    d1_[i] = s.d1;
    d2_[i] = s.d2;
  }
  if (!(min_rho() > 0.0)) {
    throw PreconditionError("PolarCurve: rho must be positive (curve not star-shaped)");
  }
}

PolarCurve PolarCurve::circle(double radius, int degree, int grid) {
  std::vector<double> cs(degree + 1, 0.0);
  cs[0] = radius;
  return PolarCurve(std::move(cs), std::vector<double>(degree, 0.0), grid);
}

PolarCurve PolarCurve::from_function(const std::function<double(double)>& rho, int degree,
                                     int grid) {
  const int samples = std::max(grid, 8 * degree);
  std::vector<double> values(samples);
  for (int i = 0; i < samples; ++i) values[i] = rho(kTwoPi * i / samples);
  std::vector<double> cs(degree + 1, 0.0);
  std::vector<double> ss(degree, 0.0);
  for (int i = 0; i < samples; ++i) cs[0] += values[i];
  cs[0] /= samples;
  for (int k = 1; k <= degree; ++k) {
    double a = 0.0;
    double b = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double t = kTwoPi * static_cast<double>((static_cast<long>(k) * i) % samples) / samples;
      a += values[i] * std::cos(t);
      b += values[i] * std::sin(t);
    }
    cs[k] = 2.0 * a / samples;
    ss[k - 1] = 2.0 * b / samples;
  }
  return PolarCurve(std::move(cs), std::move(ss), grid);
}

PolarCurve PolarCurve::ellipse(double a, double b, int degree, int grid) {
  if (!(a > 0.0 && b > 0.0)) throw PreconditionError("ellipse: semi-axes must be positive");
  return from_function(
      [a, b](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return a * b / std::sqrt(b * b * c * c + a * a * s * s);
      },
      degree, grid);
}

double PolarCurve::rho(double theta) const { return evaluate(cos_, sin_, theta).rho; }
double PolarCurve::rho_d1(double theta) const { return evaluate(cos_, sin_, theta).d1; }
double PolarCurve::rho_d2(double theta) const { return evaluate(cos_, sin_, theta).d2; }
double PolarCurve::angle(int i) const { return kTwoPi * i / grid_size(); }

double PolarCurve::min_rho() const { return *std::min_element(rho_.begin(), rho_.end()); }
double PolarCurve::max_rho() const { return *std::max_element(rho_.begin(), rho_.end()); }

double PolarCurve::convexity_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rho_.size(); ++i) {
    m = std::min(m, rho_[i] * rho_[i] + 2.0 * d1_[i] * d1_[i] - rho_[i] * d2_[i]);
  }
  return m;
}

PolarCurve PolarCurve::scaled(double factor) const {
  auto cs = cos_;
  auto ss = sin_;
  for (auto& c : cs) c *= factor;
  for (auto& s : ss) s *= factor;
  return PolarCurve(std::move(cs), std::move(ss), grid_size());
}

PolarCurve PolarCurve::refined() const {
  auto cs = cos_;
  auto ss = sin_;
  cs.resize(2 * degree() + 1, 0.0);
  ss.resize(2 * degree(), 0.0);
  return PolarCurve(std::move(cs), std::move(ss), 2 * grid_size());
}

PolarCurve PolarCurve::regridded(int grid) const { return PolarCurve(cos_, sin_, grid); }

void write_curve(std::ostream& out, const PolarCurve& curve) {
  const auto old_precision = out.precision(17);
  out << curve.degree() << '\n';
  for (std::size_t i = 0; i < curve.cos_coeffs().size(); ++i) {
    out << (i ? " " : "") << curve.cos_coeffs()[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < curve.sin_coeffs().size(); ++i) {
    out << (i ? " " : "") << curve.sin_coeffs()[i];
  }
  out << '\n';
  out.precision(old_precision);
}

PolarCurve read_curve(std::istream& in, int grid) {
  int k = -1;
  if (!(in >> k) || k < 0) throw PreconditionError("read_curve: missing or invalid degree");
  std::vector<double> cs(k + 1);
  std::vector<double> ss(k);
  for (auto& c : cs) {
    if (!(in >> c)) throw PreconditionError("read_curve: truncated cosine coefficients");
  }
  for (auto& s : ss) {
    if (!(in >> s)) throw PreconditionError("read_curve: truncated sine coefficients");
  }
  return PolarCurve(std::move(cs), std::move(ss), std::max(grid, 4 * std::max(k, 2)));
}

double curvature_at(const PolarCurve& curve, double theta) {
  const double r = curve.rho(theta);
  const double d1 = curve.rho_d1(theta);
  const double d2 = curve.rho_d2(theta);
  const double q = r * r + d1 * d1;
  return (r * r + 2.0 * d1 * d1 - r * d2) / (q * std::sqrt(q));
}

Estimate weighted_area(const PolarCurve& curve, const WeightPair& wp, Vec2 offset) {
  const auto rho = curve.rho_grid();
  const int n = curve.grid_size();
  double quad_err = 0.0;
  const bool centred = offset.x == 0.0 && offset.y == 0.0;
  std::vector<double> inner(n);
  for (int i = 0; i < n; ++i) {
    const double c = std::cos(curve.angle(i));
    const double s = std::sin(curve.angle(i));
    Estimate e;
    if (centred) {
      e = integrate([&wp](double t) { return t * wp.w(t); }, 0.0, rho[i]);
    } else {
      e = integrate(
          [&](double t) { return t * wp.w(std::hypot(offset.x + t * c, offset.y + t * s)); },
          0.0, rho[i]);
    }
    inner[i] = e.value;
    quad_err += e.error;
  }
  auto est = periodic_integral(n, [&](int i) { return inner[i]; });
  est.error += quad_err * kTwoPi / n;
  return est;
}

double ball_weighted_area(double r, const WeightPair& wp) {
  if (r <= 0.0) return 0.0;
  if (wp.is_gaussian()) return -kTwoPi * std::expm1(-0.5 * r * r);
  return kTwoPi * integrate([&wp](double t) { return t * wp.w(t); }, 0.0, r).value;
}

double matched_radius(double area, const WeightPair& wp) {
  if (!(area > 0.0)) throw PreconditionError("matched_radius: area must be positive");
  if (wp.is_gaussian()) {
    if (!(area < kTwoPi)) throw PreconditionError("matched_radius: area not attainable");
    return std::sqrt(-2.0 * std::log1p(-area / kTwoPi));
  }
  const double sup = ball_weighted_area(wp.max_radius(), wp);
  if (!(area < sup)) throw PreconditionError("matched_radius: area not attainable");
  double hi = 1.0;
  while (ball_weighted_area(hi, wp) < area) hi = std::min(2.0 * hi, wp.max_radius());
  return find_root([&](double r) { return ball_weighted_area(r, wp) - area; }, 0.0, hi);
}

Estimate curvature_energy(const PolarCurve& curve, const WeightPair& wp, Vec2 offset) {
  const auto rho = curve.rho_grid();
  const auto d1 = curve.d1_grid();
  const auto d2 = curve.d2_grid();
  return periodic_integral(curve.grid_size(), [&](int i) {
    const double r = rho[i];
    const double q = r * r + d1[i] * d1[i];
    double dist = r;
    if (offset.x != 0.0 || offset.y != 0.0) {
      const double t = curve.angle(i);
      dist = std::hypot(offset.x + r * std::cos(t), offset.y + r * std::sin(t));
    }
    return (r * r + 2.0 * d1[i] * d1[i] - r * d2[i]) / q * wp.f(dist);
  });
}

double ball_curvature_energy(double r, const WeightPair& wp) { return kTwoPi * wp.f(r); }

double normal_deficiency(const PolarCurve& curve, double theta) {
  const double r = curve.rho(theta);
  const double d1 = curve.rho_d1(theta);
  return r * d1 * d1 / (r * r + d1 * d1);
}

double normal_deficiency_cartesian(const PolarCurve& curve, double theta) {
  const double r = curve.rho(theta);
  const double d1 = curve.rho_d1(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double x = r * c;
  const double y = r * s;
  // Counter-clockwise tangent; the outward normal is its clockwise rotation.
  const double tx = d1 * c - r * s;
  const double ty = d1 * s + r * c;
  const double len = std::hypot(tx, ty);
  const double nx = ty / len;
  const double ny = -tx / len;
  const double norm = std::hypot(x, y);
  const double dot = x * nx + y * ny;
  return norm - dot * dot / norm;
}

AlphaBeta alpha_beta(const PolarCurve& curve, const WeightPair& wp) {
  const auto rho = curve.rho_grid();
  const auto d1 = curve.d1_grid();
  const int n = curve.grid_size();
  std::vector<double> deficiency_ds(n);
  for (int i = 0; i < n; ++i) {
    const double q = rho[i] * rho[i] + d1[i] * d1[i];
    deficiency_ds[i] = rho[i] * d1[i] * d1[i] / std::sqrt(q);
  }
  AlphaBeta out;
  out.alpha = periodic_integral(n, [&](int i) { return -deficiency_ds[i] * wp.df(rho[i]); });
  out.beta = periodic_integral(n, [&](int i) {
    const double r = rho[i];
    return deficiency_ds[i] * (wp.f(r) - r * wp.df(r)) / (r * r);
  });
  out.alpha_radial =
      periodic_integral(n, [&](int i) { return -deficiency_ds[i] * wp.df(rho[i]) / rho[i]; });
  return out;
}

namespace {

struct MatchedBall {
  double radius;
  double energy;
  double energy_error;
};

MatchedBall match_ball(const Estimate& area, const WeightPair& wp) {
  const double r = matched_radius(area.value, wp);
  // dA/dr = 2 pi r w(r); propagate the area error to the ball energy.
  const double dr = area.error / (kTwoPi * r * std::max(wp.w(r), 1e-300));
  return {r, ball_curvature_energy(r, wp), kTwoPi * std::abs(wp.df(r)) * dr};
}

}  // namespace

TwoSidedReport verify_two_sided(const PolarCurve& curve, const WeightPair& wp, double slack) {
  if (!curve.is_convex()) {
    throw PreconditionError("verify_two_sided: convexity certificate fails");
  }
  const auto area = weighted_area(curve, wp);
  const auto ball = match_ball(area, wp);
  const auto energy = curvature_energy(curve, wp);
  const auto ab = alpha_beta(curve, wp);

  TwoSidedReport rep;
  rep.radius = ball.radius;
  rep.gap = ball.energy - energy.value;
  const double gap_err = ball.energy_error + energy.error;
  rep.lower = InequalityReport::make(ab.alpha.value, rep.gap, ab.alpha.error + gap_err + slack);
  rep.upper = InequalityReport::make(rep.gap, ab.beta.value, ab.beta.error + gap_err + slack);
  rep.lower_radial = InequalityReport::make(ab.alpha_radial.value, rep.gap,
                                            ab.alpha_radial.error + gap_err + slack);
  rep.ball_bound = InequalityReport::make(energy.value, ball.energy, gap_err + slack);
  return rep;
}

InequalityReport boundary_inverse_weight(const PolarCurve& curve, const WeightPair& wp,
                                         double slack) {
  if (curve.min_rho() < 1e-6) {
    throw PreconditionError("boundary_inverse_weight: origin on or near the boundary");
  }
  const auto area = weighted_area(curve, wp);
  const auto ball = match_ball(area, wp);
  const auto rho = curve.rho_grid();
  const auto d1 = curve.d1_grid();
  const auto boundary = periodic_integral(curve.grid_size(), [&](int i) {
    const double r = rho[i];
    return wp.f(r) / r * std::sqrt(r * r + d1[i] * d1[i]);
  });
  // The ball side is 2 pi f(r), whose error is that of the ball energy.
  return InequalityReport::make(ball.energy, boundary.value,
                                boundary.error + ball.energy_error + slack);
}

InequalityReport ball_maximality(const PolarCurve& curve, const WeightPair& wp, Vec2 offset,
                                 double slack) {
  const auto area = weighted_area(curve, wp, offset);
  const auto ball = match_ball(area, wp);
  const auto energy = curvature_energy(curve, wp, offset);
  return InequalityReport::make(energy.value, ball.energy,
                                energy.error + ball.energy_error + slack);
}

namespace {

struct Polyline {
  std::vector<double> x;
  std::vector<double> y;
};

Polyline sample_boundary(const PolarCurve& c, int samples) {
  Polyline p;
  p.x.resize(samples);
  p.y.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    const double r = c.rho(t);
    p.x[i] = r * std::cos(t);
    p.y[i] = r * std::sin(t);
  }
  return p;
}

/// sup over boundary samples of `from` of the distance to the region of `to`.
double directed_distance(const Polyline& from, const PolarCurve& to, const Polyline& to_line) {
  const int m = static_cast<int>(to_line.x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < from.x.size(); ++i) {
    const double px = from.x[i];
    const double py = from.y[i];
    const double norm = std::hypot(px, py);
    double phi = std::atan2(py, px);
    if (phi < 0.0) phi += kTwoPi;
    const double boundary = to.rho(phi);
    if (norm <= boundary) continue;
    // The ray point at distance norm - boundary bounds the nearest distance,
    // which confines the search to an angular window around phi.
    const double bound = norm - boundary;
    int lo = 0;
    int hi = m;
    if (bound < 0.5 * norm) {
      const double window = std::asin(bound / norm);
      const int centre = static_cast<int>(std::floor(phi / kTwoPi * m));
      const int half = static_cast<int>(std::ceil(window / kTwoPi * m)) + 2;
      lo = centre - half;
      hi = centre + half + 1;
    }
    double best = bound;
    for (int j = lo; j < hi; ++j) {
      const int a = ((j % m) + m) % m;
      const int b = (a + 1) % m;
      best = std::min(best, point_segment_distance(px, py, to_line.x[a], to_line.y[a],
                                                            to_line.x[b], to_line.y[b]));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const PolarCurve& a, const PolarCurve& b, int samples) {
  const auto pa = sample_boundary(a, samples);
  const auto pb = sample_boundary(b, samples);
  return std::max(directed_distance(pa, b, pb), directed_distance(pb, a, pa));
}

double support_distance(const PolarCurve& a, const PolarCurve& b, int directions) {
  const int samples = 4096;
  const auto pa = sample_boundary(a, samples);
  const auto pb = sample_boundary(b, samples);
  const auto support = [samples](const Polyline& p, double ux, double uy) {
    double h = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) h = std::max(h, p.x[i] * ux + p.y[i] * uy);
    return h;
  };
  double worst = 0.0;
  for (int i = 0; i < directions; ++i) {
    const double t = kTwoPi * i / directions;
    const double ux = std::cos(t);
    const double uy = std::sin(t);
    worst = std::max(worst, std::abs(support(pa, ux, uy) - support(pb, ux, uy)));
  }
  return worst;
}

InequalityReport lemma_gradient_bound(const PolarCurve& curve, double tol) {
  if (!curve.is_convex()) {
    throw PreconditionError("lemma_gradient_bound: convexity certificate fails");
  }
  if (!(curve.max_rho() < 2.0)) {
    throw PreconditionError("lemma_gradient_bound: rho must lie in (0, 2)");
  }
  double delta = 0.0;
  double slope = 0.0;
  for (int i = 0; i < curve.grid_size(); ++i) {
    delta = std::max(delta, std::abs(curve.rho_grid()[i] - 1.0));
    slope = std::max(slope, std::abs(curve.d1_grid()[i]));
  }
  if (!(delta < 1.0)) throw PreconditionError("lemma_gradient_bound: ||rho - 1|| >= 1");
  const double bound = 2.0 * std::sqrt(delta) * (1.0 + delta) / (1.0 - delta);
  return InequalityReport::make(slope, bound, tol);
}

std::vector<double> stability_ratio(std::span<const PolarCurve> family, const WeightPair& wp,
                                    double r) {
  const auto ball = PolarCurve::circle(r);
  const double ball_energy = ball_curvature_energy(r, wp);
  std::vector<double> out;
  out.reserve(family.size());
  for (const auto& curve : family) {
    if (!curve.is_convex()) {
      throw PreconditionError("stability_ratio: family member is not convex");
    }
    const double gap = std::abs(curvature_energy(curve, wp).value - ball_energy);
    const double dist = hausdorff_distance(curve, ball);
    out.push_back(dist > 1e-12 ? gap / dist : 0.0);
  }
  return out;
}

}  // namespace gausscurv
