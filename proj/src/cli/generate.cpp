#include "gausscurv/cli/generate.hpp"

#include <cmath>

#include "gausscurv/error.hpp"

namespace gausscurv::cli {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr int kMaxRejections = 1000;

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

PolarCurve generate_convex_polar(std::uint64_t seed, double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 0.3)) {
    throw PreconditionError("generate_convex_polar: amplitude must be in (0, 0.3]");
  }
  constexpr int degree = 8;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<double> c(degree + 1, 0.0);
    std::vector<double> s(degree, 0.0);
    c[0] = 1.0;
    for (int k = 2; k <= degree; ++k) {
      std::uniform_real_distribution<double> dist(-amplitude / (k * k * k),
                                                  amplitude / (k * k * k));
      c[k] = dist(rng);
      s[k - 1] = dist(rng);
    }
    PolarCurve curve(std::move(c), std::move(s));
    if (curve.min_rho() > 0.0 && curve.is_convex()) return curve;
  }
  throw NumericalError("generate_convex_polar: 1000 consecutive rejections");
}

PolarCurve generate_star_polar(std::uint64_t seed, double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 0.5)) {
    throw PreconditionError("generate_star_polar: amplitude must be in (0, 0.5]");
  }
  constexpr int degree = 12;
  std::mt19937_64 rng(seed);
  std::vector<double> c(degree + 1, 0.0);
  std::vector<double> s(degree, 0.0);
  c[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    std::uniform_real_distribution<double> dist(-amplitude / (k * k), amplitude / (k * k));
    c[k] = dist(rng);
    s[k - 1] = dist(rng);
  }
  // sum 1/k^2 < 1.65, so rho >= 1 - 0.825 > 0.
  return PolarCurve(std::move(c), std::move(s));
}

RadialGraph generate_even_body(std::uint64_t seed, double radius, double amplitude) {
  if (!(amplitude > 0.0 && amplitude <= 0.5)) {
    throw PreconditionError("generate_even_body: amplitude must be in (0, 0.5]");
  }
  constexpr int degree = 6;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<double> coeffs(basis_size(Basis::full, degree), 0.0);
    for (int k = 2; k <= degree; k += 2) {
      std::uniform_real_distribution<double> dist(-amplitude / (k * k), amplitude / (k * k));
      for (int i = 1; i <= modes_of_degree(Basis::full, k); ++i) {
        coeffs[basis_index(Basis::full, k, i)] = dist(rng);
      }
    }
    HarmonicField u(3, degree, Basis::full, std::move(coeffs));
    try {
      RadialGraph body(radius, std::move(u), 8, true);
      if (body.is_convex()) return body;
    } catch (const PreconditionError&) {
      // h not positive everywhere: redraw.
    }
  }
  throw NumericalError("generate_even_body: 1000 consecutive rejections");
}

std::vector<PolarCurve> stability_family(const std::string& family, double r, int first,
                                         int last) {
  if (family != "ellipse" && family != "bump") {
    throw PreconditionError("stability_family: unknown family '" + family + "'");
  }
  std::vector<PolarCurve> out;
  for (int h = first; h <= last; ++h) {
    if (family == "ellipse") {
      out.push_back(PolarCurve::ellipse(r * (1.0 + 1.0 / h), r));
    } else {
      out.emplace_back(std::vector<double>{r, 0.0, r / h}, std::vector<double>{0.0, 0.0});
    }
  }
  return out;
}

}  // namespace gausscurv::cli
