#include "mtlab/kink.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab {

KinkProfile KinkProfile::from_sigma(double sigma, double center) {
  return KinkProfile{solve_cubic(sigma), center};
}

double KinkProfile::rate() const {
  return (roots.b - roots.a) / std::numbers::sqrt2;
}

double KinkProfile::width() const { return 1.0 / rate(); }

double kink_value(const KinkProfile& k, double xi) {
  const double z = k.rate() * (xi - k.center);
  // Logistic 1/(1+e^z) evaluated without overflow on either side.
  double s;
  if (z > 0.0) {
    const double e = std::exp(-z);
    s = e / (1.0 + e);
  } else {
    s = 1.0 / (1.0 + std::exp(z));
  }
  return k.roots.a + (k.roots.b - k.roots.a) * s;
}

double kink_slope(const KinkProfile& k, double xi) {
  const double psi = kink_value(k, xi);
  return (psi - k.roots.a) * (psi - k.roots.b) / std::numbers::sqrt2;
}

double kink_curvature(const KinkProfile& k, double xi) {
  const double psi = kink_value(k, xi);
  const double slope = (psi - k.roots.a) * (psi - k.roots.b) / std::numbers::sqrt2;
  return (2.0 * psi - k.roots.a - k.roots.b) * slope / std::numbers::sqrt2;
}

double consistent_rho(const CubicRoots& roots) {
  return -3.0 * roots.d / std::numbers::sqrt2;
}

double velocity_literal(const PhysicalParams& p, double d) {
  require_valid(p);
  if (d == 0.0) {
    throw SingularVelocity("velocity law diverges at d = 0 (zero field)");
  }
  const double ratio = 2.0 * p.gamma / (9.0 * d * d * p.M * p.v0 * p.v0);
  return p.v0 / std::sqrt(1.0 + ratio);
}

double subsonic_speed_for(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError(fmt::format("speed equation needs kappa >= 0, got {}", kappa));
  }
  if (kappa == 0.0) return 0.0;
  // f(nu) = nu - kappa sqrt(1 - nu^2) is strictly increasing on [0, 1],
  // f(0) = -kappa < 0 and f(1) = 1 > 0.
  auto f = [kappa](double nu) { return nu - kappa * std::sqrt((1.0 - nu) * (1.0 + nu)); };
  std::uintmax_t max_iter = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [lo, hi] =
      boost::math::tools::toms748_solve(f, 0.0, 1.0, -kappa, 1.0, tol, max_iter);
  return 0.5 * (lo + hi);
}

double velocity_consistent(const PhysicalParams& p, const CubicRoots& roots) {
  require_valid(p);
  if (p.gamma == 0.0) {
    throw NoRoot("consistent velocity needs gamma > 0: without friction no "
                 "finite speed balances the forcing");
  }
  if (roots.d == 0.0) {
    throw NoRoot("consistent velocity needs d != 0 (nonzero field)");
  }
  // gamma v / sqrt(M |A| (v0^2 - v^2)) = |rho*| in terms of nu = v / v0.
  const double rho_star = std::abs(consistent_rho(roots));
  const double kappa = rho_star * std::sqrt(p.M * std::abs(p.A)) / p.gamma;
  return p.v0 * subsonic_speed_for(kappa);
}

double transfer_time(double L, double v) {
  if (!(L > 0.0) || !(v > 0.0) || !std::isfinite(L) || !std::isfinite(v)) {
    throw DomainError(fmt::format(
        "transfer time needs L > 0 and v > 0 (got L = {}, v = {})", L, v));
  }
  return L / v;
}

}  // namespace mtlab
