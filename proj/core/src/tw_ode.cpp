#include "mtlab/tw_ode.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab {
namespace {

constexpr double kBlowupBound = 1e3;

struct Phase {
  double psi;
  double dpsi;
};

Phase rhs(const Phase& s, double rho, double sigma) {
  return {s.dpsi, -rho * s.dpsi + s.psi * s.psi * s.psi - s.psi - sigma};
}

}  // namespace

TwTrajectory integrate_traveling_wave(double rho, double sigma, double psi0,
                                      double dpsi0, double xi0, double xi1,
                                      double step) {
  if (std::abs(sigma) >= critical_sigma() || !std::isfinite(sigma)) {
    throw DomainError(fmt::format(
        "sigma = {} outside the three-root range |sigma| < {:.17g}", sigma,
        critical_sigma()));
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError(fmt::format("step must be positive, got {}", step));
  }
  if (!std::isfinite(xi0) || !std::isfinite(xi1) || !(xi1 > xi0)) {
    throw DomainError(fmt::format("need finite xi0 < xi1, got [{}, {}]", xi0, xi1));
  }
  if (!std::isfinite(rho) || !std::isfinite(psi0) || !std::isfinite(dpsi0)) {
    throw DomainError("rho and initial data must be finite");
  }

  const double span = xi1 - xi0;
  const auto n = static_cast<std::size_t>(std::ceil(span / step - 1e-9));
  const std::size_t steps = std::max<std::size_t>(n, 1);
  const double h = span / static_cast<double>(steps);

  TwTrajectory out;
  out.rho = rho;
  out.sigma = sigma;
  out.xi.reserve(steps + 1);
  out.psi.reserve(steps + 1);
  out.dpsi.reserve(steps + 1);

  Phase s{psi0, dpsi0};
  out.xi.push_back(xi0);
  out.psi.push_back(s.psi);
  out.dpsi.push_back(s.dpsi);

  for (std::size_t i = 1; i <= steps; ++i) {
    const Phase k1 = rhs(s, rho, sigma);
    const Phase k2 = rhs({s.psi + 0.5 * h * k1.psi, s.dpsi + 0.5 * h * k1.dpsi}, rho, sigma);
    const Phase k3 = rhs({s.psi + 0.5 * h * k2.psi, s.dpsi + 0.5 * h * k2.dpsi}, rho, sigma);
    const Phase k4 = rhs({s.psi + h * k3.psi, s.dpsi + h * k3.dpsi}, rho, sigma);
    s.psi += h / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    s.dpsi += h / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);

    const double xi = (i == steps) ? xi1 : xi0 + static_cast<double>(i) * h;
    if (!(std::abs(s.psi) <= kBlowupBound) || !std::isfinite(s.dpsi)) {
      throw Blowup(fmt::format("traveling-wave solution blew up at xi = {} "
                               "(|psi| > {})", xi, kBlowupBound),
                   xi);
    }
    out.xi.push_back(xi);
    out.psi.push_back(s.psi);
    out.dpsi.push_back(s.dpsi);
  }
  return out;
}

double traveling_wave_residual(const KinkProfile& profile, double rho,
                               double sigma, std::span<const double> xi_grid) {
  double worst = 0.0;
  for (double xi : xi_grid) {
    const double psi = kink_value(profile, xi);
    const double r = kink_curvature(profile, xi) + rho * kink_slope(profile, xi) -
                     psi * psi * psi + psi + sigma;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double traveling_wave_energy(double psi, double dpsi) {
  const double w = psi * psi - 1.0;
  return 0.5 * dpsi * dpsi - 0.25 * w * w;
}

}  // namespace mtlab
