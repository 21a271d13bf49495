#pragma once

#include <span>
#include <vector>

#include "mtlab/kink.hpp"

namespace mtlab {

/// Sampled solution of psi'' + rho psi' - psi^3 + psi + sigma = 0.
struct TwTrajectory {
  std::vector<double> xi;
  std::vector<double> psi;
  std::vector<double> dpsi;
  double rho = 0.0;
  double sigma = 0.0;
};

/// Classical RK4 on (psi, psi') from xi0 to xi1 with a fixed step. The
/// step is shrunk to span / ceil(span / step) so xi1 is hit exactly.
/// Throws Blowup (carrying xi) once |psi| exceeds 1e3.
TwTrajectory integrate_traveling_wave(double rho, double sigma, double psi0,
                                      double dpsi0, double xi0, double xi1,
                                      double step);

/// max |psi'' + rho psi' - psi^3 + psi + sigma| over `xi_grid`, using the
/// profile's closed-form derivatives.
double traveling_wave_residual(const KinkProfile& profile, double rho,
                               double sigma, std::span<const double> xi_grid);

/// 1/2 psi'^2 - 1/4 (psi^2 - 1)^2, non-increasing in xi when sigma = 0
/// and rho >= 0.
double traveling_wave_energy(double psi, double dpsi);

}  // namespace mtlab
