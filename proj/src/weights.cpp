#include "gausscurv/weights.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gausscurv/error.hpp"
#include "gausscurv/numerics.hpp"

namespace gausscurv {

WeightPair make_gaussian_weight() {
  return WeightPair([](double r) { return std::exp(-0.5 * r * r); },
                    [](double r) { return -r * std::exp(-0.5 * r * r); },
                    /*monotone_w=*/true, /*gaussian=*/true, /*max_radius=*/1e3);
}

std::vector<double> admissibility_grid(double max_radius) {
  constexpr int kSamples = 1000;
  const double lo = std::log(1e-6);
  const double hi = std::log(max_radius);
  std::vector<double> grid(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * i / (kSamples - 1));
  }
  return grid;
}

WeightPair make_weight(Evaluator f, Evaluator df, double max_radius) {
  if (!(max_radius > 1e-6)) {
    throw PreconditionError("make_weight: max_radius must exceed 1e-6");
  }
  const auto grid = admissibility_grid(max_radius);
  bool monotone = true;
  double previous_w = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double fr = f(r);
    const double dfr = df(r);
    if (!(fr > 0.0) || !std::isfinite(fr)) {
      throw PreconditionError("make_weight: f(" + std::to_string(r) +
                              ") is not positive; not an admissible weight");
    }
    if (dfr > 0.0 || !std::isfinite(dfr)) {
      throw PreconditionError("make_weight: f'(" + std::to_string(r) +
                              ") > 0; f must be non-increasing");
    }
    const double w = -dfr / r;
    if (i > 0 && w > previous_w * (1.0 + 1e-12) + 1e-300) monotone = false;
    previous_w = w;
  }
  return WeightPair(std::move(f), std::move(df), monotone, false, max_radius);
}

double psi(double s) { return 0.5 * std::erfc(-s / std::sqrt(2.0)); }

double psi_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("psi_inverse: p outside (0, 1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

namespace {

double moment(int power, double r) {
  const auto integrand = [power, r](double t) {
    return std::pow(t, power) * std::exp(-0.5 * r * r * t * t);
  };
  return integrate(integrand, 0.0, 1.0, 1e-12).value;
}

}  // namespace

RadialMoments radial_moments(int n, double r) {
  if (n < 2) throw PreconditionError("radial_moments: n must be >= 2");
  if (!(r > 0.0)) throw PreconditionError("radial_moments: r must be positive");
  RadialMoments m;
  m.n = n;
  m.r = r;
  m.a = moment(n - 1, r);
  m.b = moment(n + 1, r);
  m.c = moment(n + 3, r);
  const double e = std::exp(-0.5 * r * r);
  const double r2 = r * r;
  m.b_recurrence = n * m.a / r2 - e / r2;
  m.c_recurrence = n * (n + 2) * m.a / (r2 * r2) - (n + 2) * e / (r2 * r2) - e / r2;
  m.residual_b = std::abs(m.b - m.b_recurrence);
  m.residual_c = std::abs(m.c - m.c_recurrence);
  return m;
}

double gaussian_radial_integral(int n, double h) {
  if (h <= 0.0) return 0.0;
  const double s = 0.5 * n;
  return std::exp((s - 1.0) * std::log(2.0) + std::lgamma(s)) *
         boost::math::gamma_p(s, 0.5 * h * h);
}

}  // namespace gausscurv
