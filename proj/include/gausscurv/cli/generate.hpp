#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gausscurv/body.hpp"
#include "gausscurv/plane.hpp"

namespace gausscurv::cli {

/// Independent stream seed for a (seed, trial index) pair.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index);

/// Convex curve rho = 1 + sum_{k=2}^{8} (c_k cos k theta + s_k sin k theta)
/// with c_k, s_k uniform in [-A/k^3, A/k^3], redrawn until the convexity
/// certificate passes. amplitude in (0, 0.3]; throws NumericalError after
/// 1000 consecutive rejections.
PolarCurve generate_convex_polar(std::uint64_t seed, double amplitude);

/// Star-shaped curve with k^-2 coefficient decay up to degree 12, not
/// necessarily convex. amplitude in (0, 0.5].
PolarCurve generate_star_polar(std::uint64_t seed, double amplitude);

/// Even perturbation of the ball B_r in R^3 with modes k = 2, 4, 6 and
/// coefficients uniform in [-A/k^2, A/k^2], redrawn until convex.
RadialGraph generate_even_body(std::uint64_t seed, double radius, double amplitude);

/// Shrinking families around B_r for h = first..last: "ellipse" has semi-axes
/// r (1 + 1/h) and r, "bump" is rho = r (1 + cos(2 theta) / h). Bump members
/// with h <= 5 are not convex.
std::vector<PolarCurve> stability_family(const std::string& family, double r, int first,
                                         int last);

}  // namespace gausscurv::cli
