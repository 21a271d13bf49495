#pragma once

namespace mtlab {

/// Real roots of psi^3 - psi - sigma = (psi - a)(psi - b)(psi - d),
/// ordered a < d < b.
struct CubicRoots {
  double a = 0.0;  ///< smallest root
  double b = 0.0;  ///< largest root
  double d = 0.0;  ///< middle root
  double sigma = 0.0;

  bool operator==(const CubicRoots&) const = default;
};

/// 2 / (3 sqrt 3): above this |sigma| two roots merge and then go complex.
double critical_sigma();

/// Trigonometric solution of the depressed cubic plus one Newton step per
/// root. Throws DegenerateRoots when |sigma| >= critical_sigma().
CubicRoots solve_cubic(double sigma);

}  // namespace mtlab
