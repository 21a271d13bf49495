#pragma once

#include "mtlab/cubic.hpp"
#include "mtlab/units.hpp"

namespace mtlab {

/// The bounded kink psi(xi) = a + (b - a) / (1 + exp((b - a)(xi - center)/sqrt 2)).
/// Runs from b at xi -> -inf down to a at xi -> +inf; the mirror kink is
/// psi(-xi).
struct KinkProfile {
  CubicRoots roots;
  double center = 0.0;

  static KinkProfile from_sigma(double sigma, double center = 0.0);

  /// Exponential rate mu = (b - a)/sqrt 2 of the profile (inverse width).
  double rate() const;
  /// Spatial width 1/mu over which the profile changes by ~e.
  double width() const;
};

double kink_value(const KinkProfile& k, double xi);
/// psi' = (psi - a)(psi - b)/sqrt 2
double kink_slope(const KinkProfile& k, double xi);
/// psi'' = (2 psi - a - b) psi' / sqrt 2
double kink_curvature(const KinkProfile& k, double xi);

/// The friction for which the kink solves the traveling-wave equation
/// exactly: rho* = -3 d / sqrt 2.
double consistent_rho(const CubicRoots& roots);

/// Literal velocity law v = v0 [1 + 2 gamma / (9 d^2 M v0^2)]^(-1/2).
/// Throws SingularVelocity for d == 0.
double velocity_literal(const PhysicalParams& p, double d);

/// Speed at which the reduced friction gamma v / sqrt(M |A| (v0^2 - v^2))
/// equals |rho*|; bracketed root solve on (0, v0).
/// Throws NoRoot when gamma == 0 or d == 0.
double velocity_consistent(const PhysicalParams& p, const CubicRoots& roots);

/// Unique nu in [0, 1) with nu / sqrt(1 - nu^2) = kappa, kappa >= 0.
double subsonic_speed_for(double kappa);

/// t = L / v.
double transfer_time(double L, double v);

}  // namespace mtlab
