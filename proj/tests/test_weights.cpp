#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gausscurv/error.hpp"
#include "gausscurv/weights.hpp"

using namespace gausscurv;

namespace {

// Composite Simpson rule on [a, b] with m (even) panels.
template <typename F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("gaussian weight values") {
  const auto g = make_gaussian_weight();
  CHECK(g.f(0.0) == 1.0);
  CHECK(g.w(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(-g.df(1.0) / 1.0 == doctest::Approx(g.f(1.0)).epsilon(1e-15));
  CHECK(g.monotone_w());
  CHECK(g.is_gaussian());
}

TEST_CASE("make_weight derives w from f'") {
  const auto rational = make_weight([](double r) { return 1.0 / (1.0 + r * r); },
                                    [](double r) { return -2.0 * r / std::pow(1.0 + r * r, 2); });
  for (double r : {1e-3, 0.5, 1.0, 3.0, 40.0}) {
    CHECK(rational.w(r) == doctest::Approx(2.0 / std::pow(1.0 + r * r, 2)).epsilon(1e-14));
  }
  CHECK(rational.monotone_w());

  const auto expo = make_weight([](double r) { return std::exp(-r); },
                                [](double r) { return -std::exp(-r); }, 100.0);
  CHECK(expo.w(2.0) == doctest::Approx(std::exp(-2.0) / 2.0).epsilon(1e-15));
  CHECK(expo.monotone_w());

  // w = r^2 e^{-r^4/4} rises before it decays.
  const auto bump = make_weight([](double r) { return std::exp(-std::pow(r, 4) / 4.0); },
                                [](double r) { return -std::pow(r, 3) * std::exp(-std::pow(r, 4) / 4.0); },
                                5.0);
  CHECK_FALSE(bump.monotone_w());
}

TEST_CASE("make_weight rejects inadmissible weights") {
  CHECK_THROWS_AS(make_weight([](double r) { return 1.0 + r; }, [](double) { return 1.0; }),
                  PreconditionError);
  CHECK_THROWS_AS(make_weight([](double r) { return 1.0 - r; }, [](double) { return -1.0; }),
                  PreconditionError);
}

TEST_CASE("w r + f' vanishes on the admissibility grid") {
  const auto wp = make_weight([](double r) { return 1.0 / std::cosh(r); },
                              [](double r) { return -std::tanh(r) / std::cosh(r); }, 50.0);
  for (double r : admissibility_grid(50.0)) {
    CHECK(std::abs(wp.w(r) * r + wp.df(r)) <= 1e-15 * std::max(1.0, std::abs(wp.df(r))));
  }
}

TEST_CASE("psi is the standard normal CDF") {
  CHECK(psi(0.0) == 0.5);
  CHECK(std::abs(psi(40.0) - 1.0) <= 1e-14);
  const double oracle =
      simpson([](double t) { return std::exp(-0.5 * t * t); }, -40.0, 1.0, 200000) /
      std::sqrt(2.0 * std::numbers::pi);
  CHECK(psi(1.0) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(psi(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
  double prev = 0.0;
  for (double s = -8.0; s <= 8.0; s += 0.25) {
    CHECK(psi(s) > prev);
    prev = psi(s);
    CHECK(std::abs(psi(s) + psi(-s) - 1.0) <= 1e-14);
    // Rounding of psi(s) near 1 limits the round trip by eps / density.
    const double density = std::exp(-0.5 * s * s) / std::sqrt(2.0 * std::numbers::pi);
    CHECK(std::abs(psi_inverse(psi(s)) - s) <= 1e-12 * std::max(1.0, std::abs(s)) + 2e-16 / density);
  }
}

TEST_CASE("radial moments against Simpson oracles") {
  for (int n = 2; n <= 8; ++n) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const auto m = radial_moments(n, r);
      const auto weight = [r](double t) { return std::exp(-0.5 * r * r * t * t); };
      const double a = simpson([&](double t) { return std::pow(t, n - 1) * weight(t); }, 0, 1, 4000);
      const double b = simpson([&](double t) { return std::pow(t, n + 1) * weight(t); }, 0, 1, 4000);
      const double c = simpson([&](double t) { return std::pow(t, n + 3) * weight(t); }, 0, 1, 4000);
      CHECK(m.a == doctest::Approx(a).epsilon(1e-12));
      CHECK(m.b == doctest::Approx(b).epsilon(1e-12));
      CHECK(m.c == doctest::Approx(c).epsilon(1e-12));
      CHECK(m.residual_b < 1e-10);
      CHECK(m.residual_c < 1e-10);
    }
  }
}

TEST_CASE("radial moment examples") {
  CHECK(radial_moments(2, 1e-4).a == doctest::Approx(0.5).epsilon(1e-8));
  const auto m3 = radial_moments(3, 1.0);
  CHECK(m3.b == doctest::Approx(3.0 * m3.a - std::exp(-0.5)).epsilon(1e-12));
  const auto m = radial_moments(3, 2.0);
  const double oracle = simpson([](double t) { return std::pow(t, 6) * std::exp(-2.0 * t * t); },
                                0.0, 1.0, 4000);
  CHECK(std::abs(m.c - oracle) < 1e-10);
  CHECK(std::abs(m.c - (15.0 * m.a / 16.0 - 5.0 * std::exp(-2.0) / 16.0 -
                        std::exp(-2.0) / 4.0)) < 1e-10);
  // Closed forms for n = 2.
  for (double r : {0.3, 1.7}) {
    CHECK(radial_moments(2, r).a == doctest::Approx(-std::expm1(-0.5 * r * r) / (r * r)).epsilon(1e-14));
  }
}

TEST_CASE("gaussian radial integral") {
  for (int n = 2; n <= 8; ++n) {
    for (double h : {0.05, 0.7, 2.0, 6.0}) {
      const double oracle = simpson(
          [n](double t) { return std::pow(t, n - 1) * std::exp(-0.5 * t * t); }, 0.0, h, 4000);
      CHECK(gaussian_radial_integral(n, h) == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}
