#include "mtlab/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab {
namespace {

double polish(double x, double sigma) {
  const double f = (x * x - 1.0) * x - sigma;
  const double df = 3.0 * x * x - 1.0;
  return x - f / df;
}

}  // namespace

double critical_sigma() { return 2.0 / (3.0 * std::sqrt(3.0)); }

CubicRoots solve_cubic(double sigma) {
  const double crit = critical_sigma();
  if (!std::isfinite(sigma) || std::abs(sigma) >= crit) {
    throw DegenerateRoots(fmt::format(
        "sigma = {} has no three distinct real roots; need |sigma| < {:.17g}",
        sigma, crit));
  }
  // psi = r cos(phi) with r = 2/sqrt(3) turns psi^3 - psi = sigma into
  // cos(3 phi) = (3 sqrt(3) / 2) sigma.
  constexpr double pi = std::numbers::pi;
  const double r = 2.0 / std::sqrt(3.0);
  const double c = std::clamp(sigma / crit, -1.0, 1.0);
  const double theta = std::acos(c) / 3.0;

  CubicRoots roots;
  roots.sigma = sigma;
  roots.b = polish(r * std::cos(theta), sigma);
  roots.d = polish(r * std::cos(theta - 2.0 * pi / 3.0), sigma);
  roots.a = polish(r * std::cos(theta - 4.0 * pi / 3.0), sigma);
  return roots;
}

}  // namespace mtlab
