#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gausscurv/cli/generate.hpp"
#include "gausscurv/error.hpp"
#include "gausscurv/plane.hpp"

using namespace gausscurv;

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic trapezoid rule over one period of length 2 pi.
template <typename F>
double periodic(F f, int m = 4000) {
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += f(2.0 * kPi * i / m);
  return s * 2.0 * kPi / m;
}

// Gauss-Legendre on [a, b] with 64 points per panel.
template <typename F>
double legendre(F f, double a, double b, int panels = 64) {
  static const auto rule = [] {
    const int m = 64;
    std::vector<double> x(m), w(m);
    for (int i = 0; i < m; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = m * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = m * (z * p1 - p0) / (z * z - 1.0);
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return std::pair{x, w};
  }();
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      s += rule.second[i] * f(lo + 0.5 * h * (rule.first[i] + 1.0));
    }
  }
  return s * 0.5 * h;
}

// Gaussian integral of the disc-like region {(x, y) : |y - cy| <= half(x)}
// for x = cx + a sin(phi), via the erf in y.
double gaussian_area_ellipse(double a, double b, double cx = 0.0) {
  return legendre(
      [&](double phi) {
        const double x = cx + a * std::sin(phi);
        const double half = b * std::cos(phi);
        return a * std::cos(phi) * std::exp(-0.5 * x * x) * std::sqrt(2.0 * kPi) *
               std::erf(half / std::sqrt(2.0));
      },
      -kPi / 2.0, kPi / 2.0);
}

// Ellipse x = a cos t, y = b sin t.
struct EllipsePoint {
  double r;       // |x|
  double speed;   // |dx/dt|
  double kappa;   // curvature
  double dot;     // <x, nu>
};

EllipsePoint ellipse_point(double a, double b, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double q = a * a * s * s + b * b * c * c;
  return {std::hypot(a * c, b * s), std::sqrt(q), a * b / (q * std::sqrt(q)),
          a * b / std::sqrt(q)};
}

double fd_curvature(const PolarCurve& c, double t) {
  const double h = 1e-4;
  const auto pos = [&](double u) {
    const double r = c.rho(u);
    return std::pair{r * std::cos(u), r * std::sin(u)};
  };
  const auto [xm, ym] = pos(t - h);
  const auto [x0, y0] = pos(t);
  const auto [xp, yp] = pos(t + h);
  const double dx = (xp - xm) / (2 * h);
  const double dy = (yp - ym) / (2 * h);
  const double ddx = (xp - 2 * x0 + xm) / (h * h);
  const double ddy = (yp - 2 * y0 + ym) / (h * h);
  return (dx * ddy - dy * ddx) / std::pow(dx * dx + dy * dy, 1.5);
}

PolarCurve random_smooth_curve(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> cs(9, 0.0), ss(8, 0.0);
  cs[0] = 1.0;
  for (int k = 1; k <= 8; ++k) {
    cs[k] = 0.2 * u(rng) / (k * k);
    ss[k - 1] = 0.2 * u(rng) / (k * k);
  }
  return PolarCurve(cs, ss);
}

const WeightPair kGauss = make_gaussian_weight();

}  // namespace

TEST_CASE("curvature of circle and ellipse") {
  const auto c = PolarCurve::circle(2.5);
  for (double t : {0.0, 1.0, 4.0}) CHECK(curvature_at(c, t) == doctest::Approx(0.4).epsilon(1e-14));
  const auto e = PolarCurve::ellipse(2.0, 1.0);
  CHECK(curvature_at(e, 0.0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(fd_curvature(e, 0.0) == doctest::Approx(2.0).epsilon(1e-6));
  for (int i = 0; i < 1024; i += 7) CHECK(curvature_at(e, e.angle(i)) > 0.0);
}

TEST_CASE("polar curvature matches Cartesian finite differences") {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_smooth_curve(rng);
    for (double t = 0.1; t < 2 * kPi; t += 0.7) {
      worst = std::max(worst, std::abs(curvature_at(c, t) - fd_curvature(c, t)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("weighted area") {
  for (double r : {0.3, 1.0, 2.7}) {
    const auto a = weighted_area(PolarCurve::circle(r), kGauss);
    CHECK(a.value == doctest::Approx(2 * kPi * (1 - std::exp(-r * r / 2))).epsilon(1e-12));
    CHECK(ball_weighted_area(r, kGauss) == doctest::Approx(a.value).epsilon(1e-13));
  }
  // f = C - r^2/2 gives w = 1.
  const auto flat = make_weight([](double r) { return 10.0 - 0.5 * r * r; },
                                [](double r) { return -r; }, 4.0);
  CHECK(weighted_area(PolarCurve::ellipse(2.0, 1.0), flat).value ==
        doctest::Approx(2 * kPi).epsilon(1e-9));

  const auto e = PolarCurve::ellipse(1.5, 0.5);
  CHECK(weighted_area(e, kGauss).value ==
        doctest::Approx(gaussian_area_ellipse(1.5, 0.5)).epsilon(1e-9));
}

TEST_CASE("matched radius") {
  CHECK(matched_radius(2 * kPi * (1 - std::exp(-0.5)), kGauss) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(matched_radius(1e-12, kGauss) < 1e-5);
  const auto rational = make_weight([](double r) { return 1.0 / (1.0 + r * r); },
                                    [](double r) { return -2.0 * r / std::pow(1.0 + r * r, 2); });
  const double area = weighted_area(PolarCurve::circle(1.0), rational).value;
  CHECK(std::abs(matched_radius(area, rational) - 1.0) < 1e-10);
  CHECK_THROWS_AS(matched_radius(0.0, kGauss), PreconditionError);
  CHECK_THROWS_AS(matched_radius(7.0, kGauss), PreconditionError);
}

TEST_CASE("curvature energy") {
  CHECK(curvature_energy(PolarCurve::circle(1.3), kGauss).value ==
        doctest::Approx(2 * kPi * std::exp(-0.5 * 1.69)).epsilon(1e-13));

  const double eps = 1e-8;
  const auto nearly_one = make_weight([eps](double r) { return std::exp(-eps * r); },
                                      [eps](double r) { return -eps * std::exp(-eps * r); });
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = cli::generate_convex_polar(seed, 0.1);
    CHECK(std::abs(curvature_energy(c, nearly_one).value - 2 * kPi) < 1e-6);
  }

  const double a = 1.2, b = 0.8;
  const double oracle = periodic([&](double t) {
    const auto p = ellipse_point(a, b, t);
    return p.kappa * std::exp(-0.5 * p.r * p.r) * p.speed;
  });
  const auto e = curvature_energy(PolarCurve::ellipse(a, b), kGauss);
  CHECK(std::abs(e.value - oracle) < 1e-8);
  CHECK(e.error < 1e-8);
}

TEST_CASE("normal deficiency") {
  const auto c = PolarCurve::circle(1.0);
  CHECK(normal_deficiency(c, 0.3) == 0.0);
  const double a = 2.0, b = 1.0;
  const auto e = PolarCurve::ellipse(a, b);
  // Cartesian oracle at the ellipse point with polar angle pi/4.
  const double t = std::atan(a / b);  // tan(theta) = (b/a) tan(t) = 1
  const auto p = ellipse_point(a, b, t);
  const double oracle = p.r - p.dot * p.dot / p.r;
  CHECK(std::abs(normal_deficiency(e, kPi / 4) - oracle) < 1e-10);
  CHECK(std::abs(normal_deficiency_cartesian(e, kPi / 4) - oracle) < 1e-10);
  for (int i = 0; i < e.grid_size(); i += 5) {
    CHECK(normal_deficiency(e, e.angle(i)) <= e.rho(e.angle(i)));
  }
}

TEST_CASE("alpha and beta") {
  const auto ab0 = alpha_beta(PolarCurve::circle(1.4), kGauss);
  CHECK(ab0.alpha.value == 0.0);
  CHECK(ab0.beta.value == 0.0);

  const double a = 1.1, b = 0.9;
  double alpha = 0.0, beta = 0.0;
  alpha = periodic([&](double t) {
    const auto p = ellipse_point(a, b, t);
    const double def = p.r - p.dot * p.dot / p.r;
    return def * p.r * std::exp(-0.5 * p.r * p.r) * p.speed;
  });
  beta = periodic([&](double t) {
    const auto p = ellipse_point(a, b, t);
    const double def = p.r - p.dot * p.dot / p.r;
    const double f = std::exp(-0.5 * p.r * p.r);
    return def * (f + p.r * p.r * f) / (p.r * p.r) * p.speed;
  });
  const auto ab = alpha_beta(PolarCurve::ellipse(a, b), kGauss);
  CHECK(std::abs(ab.alpha.value - alpha) < 1e-8);
  CHECK(std::abs(ab.beta.value - beta) < 1e-8);
  CHECK(ab.alpha.value <= ab.beta.value);
  CHECK(ab.alpha_radial.value >= 0.0);
}

TEST_CASE("two-sided bound") {
  const auto circle = verify_two_sided(PolarCurve::circle(1.0), kGauss);
  CHECK(std::abs(circle.gap) < 1e-12);
  CHECK(circle.lower.passed);
  CHECK(circle.upper.passed);

  const auto near = verify_two_sided(PolarCurve::ellipse(1.05, 0.95), kGauss);
  CHECK(near.upper.passed);
  CHECK(near.lower_radial.passed);
  CHECK(near.ball_bound.passed);
  CHECK(near.gap > 0.0);

  // The alpha lower bound is violated here; its radial variant holds.
  const auto wide = verify_two_sided(PolarCurve::ellipse(2.1, 1.9), kGauss);
  CHECK_FALSE(wide.lower.passed);
  CHECK(wide.lower.margin < -1e-3);
  CHECK(wide.lower_radial.passed);
  CHECK(wide.upper.passed);

  int upper = 0, radial = 0, ball = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto rep = verify_two_sided(cli::generate_convex_polar(seed, 0.05), kGauss);
    upper += rep.upper.passed;
    radial += rep.lower_radial.passed;
    ball += rep.ball_bound.passed;
  }
  CHECK(upper == 200);
  CHECK(radial == 200);
  CHECK(ball == 200);

  std::vector<double> cs{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2};
  const PolarCurve wavy(cs, std::vector<double>(8, 0.0));
  CHECK_THROWS_AS(verify_two_sided(wavy, kGauss), PreconditionError);
}

TEST_CASE("boundary inverse weight") {
  const auto circle = boundary_inverse_weight(PolarCurve::circle(0.8), kGauss);
  CHECK(std::abs(circle.margin) < 1e-12);
  CHECK(circle.passed);

  const double a = 1.3, b = 0.7;
  const auto rep = boundary_inverse_weight(PolarCurve::ellipse(a, b), kGauss);
  const double oracle = periodic([&](double t) {
    const auto p = ellipse_point(a, b, t);
    return std::exp(-0.5 * p.r * p.r) / p.r * p.speed;
  });
  const double r = std::sqrt(-2.0 * std::log1p(-gaussian_area_ellipse(a, b) / (2 * kPi)));
  CHECK(std::abs(rep.rhs - oracle) < 1e-9);
  CHECK(std::abs(rep.lhs - 2 * kPi * std::exp(-0.5 * r * r)) < 1e-9);
  CHECK(rep.passed);

  std::vector<double> cs(6, 0.0);
  cs[0] = 1.0;
  cs[5] = 0.15;
  CHECK(boundary_inverse_weight(PolarCurve(cs, std::vector<double>(5, 0.0)), kGauss).passed);

  std::vector<double> tiny(2, 1.0);
  tiny[1] = 1.0 - 1e-8;
  CHECK_THROWS_AS(boundary_inverse_weight(PolarCurve(tiny, {0.0}), kGauss), PreconditionError);
}

TEST_CASE("ball maximality with translation") {
  const double r = 1.0;
  const double cx = 1.5;
  const auto rep = ball_maximality(PolarCurve::circle(r), kGauss, {cx, 0.0});
  const double energy =
      periodic([&](double t) { return std::exp(-0.5 * (cx * cx + 2 * cx * r * std::cos(t) + r * r)); });
  const double area = gaussian_area_ellipse(r, r, cx);
  const double matched = std::sqrt(-2.0 * std::log1p(-area / (2 * kPi)));
  CHECK(std::abs(rep.lhs - energy) < 1e-10);
  CHECK(std::abs(rep.rhs - 2 * kPi * std::exp(-0.5 * matched * matched)) < 1e-9);
  CHECK(rep.passed);
  CHECK(rep.margin > 0.0);
}

TEST_CASE("hausdorff distance") {
  const auto unit = PolarCurve::circle(1.0);
  CHECK(hausdorff_distance(unit, unit) == 0.0);
  CHECK(hausdorff_distance(unit, PolarCurve::circle(1.2)) == doctest::Approx(0.2).epsilon(1e-12));
  const auto e = PolarCurve::ellipse(1.1, 1.0);
  CHECK(std::abs(hausdorff_distance(e, unit) - 0.1) < 1e-4);
  CHECK(std::abs(support_distance(e, unit) - 0.1) < 1e-4);
  const auto c = cli::generate_convex_polar(3, 0.2);
  const auto d = cli::generate_convex_polar(4, 0.2);
  CHECK(std::abs(hausdorff_distance(c, d) - support_distance(c, d)) < 1e-4);
}

TEST_CASE("convex gradient bound") {
  const auto unit = lemma_gradient_bound(PolarCurve::circle(1.0));
  CHECK(unit.lhs == 0.0);
  CHECK(unit.rhs == 0.0);
  CHECK(unit.passed);

  std::vector<double> cs{1.0, 0.0, 0.04};
  const auto rep = lemma_gradient_bound(PolarCurve(cs, {0.0, 0.0}));
  CHECK(rep.lhs == doctest::Approx(0.08).epsilon(1e-9));
  CHECK(rep.passed);

  std::vector<double> wavy(9, 0.0);
  wavy[0] = 1.0;
  wavy[8] = 0.2;
  CHECK_THROWS_AS(lemma_gradient_bound(PolarCurve(wavy, std::vector<double>(8, 0.0))),
                  PreconditionError);
  CHECK_THROWS_AS(lemma_gradient_bound(PolarCurve::circle(2.5)), PreconditionError);
}

TEST_CASE("stability ratio") {
  std::vector<PolarCurve> same(3, PolarCurve::circle(1.0));
  for (double v : stability_ratio(same, kGauss, 1.0)) CHECK(v == 0.0);

  std::vector<PolarCurve> family;
  for (int h = 4; h <= 64; h *= 2) family.push_back(PolarCurve::ellipse(1.0 + 1.0 / h, 1.0));
  const auto ratios = stability_ratio(family, kGauss, 1.0);
  for (double v : ratios) {
    CHECK(v > 0.0);
    CHECK(v < 10.0);
  }
  // Distance 1/h and a first-order energy change give a converging ratio.
  CHECK(std::abs(ratios.back() - ratios[ratios.size() - 2]) < 0.1 * ratios.back());

  std::vector<PolarCurve> bad{PolarCurve(std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2},
                                         std::vector<double>(8, 0.0))};
  CHECK_THROWS_AS(stability_ratio(bad, kGauss, 1.0), PreconditionError);
}

TEST_CASE("refinement leaves integrals within their error estimates") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto c = cli::generate_convex_polar(seed, 0.1);
    const auto f = c.refined();
    const auto e1 = curvature_energy(c, kGauss);
    const auto e2 = curvature_energy(f, kGauss);
    CHECK(std::abs(e1.value - e2.value) <= e1.error + 1e-14);
    const auto a1 = weighted_area(c, kGauss);
    const auto a2 = weighted_area(f, kGauss);
    CHECK(std::abs(a1.value - a2.value) <= a1.error + 1e-14);
  }
}

TEST_CASE("normal oscillation sandwich") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto c = cli::generate_star_polar(seed, 0.3);
    for (int i = 0; i < c.grid_size(); i += 3) {
      const double t = c.angle(i);
      const double r = c.rho(t);
      const double d1 = c.rho_d1(t);
      // Outward normal, and the radial direction of the ball normal.
      const double tx = d1 * std::cos(t) - r * std::sin(t);
      const double ty = d1 * std::sin(t) + r * std::cos(t);
      const double len = std::hypot(tx, ty);
      const double dx = ty / len - std::cos(t);
      const double dy = -tx / len - std::sin(t);
      const double osc = r * (dx * dx + dy * dy);
      const double def = normal_deficiency(c, t);
      CHECK(0.5 * osc <= def + 1e-14);
      CHECK(def <= osc + 1e-14);
    }
  }
}

TEST_CASE("curve io round trip") {
  const auto c = cli::generate_star_polar(11, 0.3);
  std::stringstream ss;
  write_curve(ss, c);
  const auto back = read_curve(ss);
  REQUIRE(back.degree() == c.degree());
  for (int k = 0; k <= c.degree(); ++k) CHECK(back.cos_coeffs()[k] == c.cos_coeffs()[k]);
  for (int k = 0; k < c.degree(); ++k) CHECK(back.sin_coeffs()[k] == c.sin_coeffs()[k]);
  std::stringstream junk("3 1.0 abc");
  CHECK_THROWS(read_curve(junk));
}

TEST_CASE("curve preconditions") {
  CHECK_THROWS_AS(PolarCurve({-1.0}, {}), PreconditionError);
  CHECK_THROWS_AS(PolarCurve::circle(1.0, 64, 128), PreconditionError);
  CHECK_THROWS_AS(PolarCurve::ellipse(0.0, 1.0), PreconditionError);
  CHECK(PolarCurve::circle(1.0).scaled(2.0).min_rho() == doctest::Approx(2.0));
  const auto c = cli::generate_convex_polar(2, 0.1);
  const auto g = c.regridded(2048);
  CHECK(g.grid_size() == 2048);
  CHECK(g.rho(0.4) == doctest::Approx(c.rho(0.4)).epsilon(1e-15));
}
