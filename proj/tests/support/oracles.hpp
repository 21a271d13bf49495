#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Roots {
  double a, d, b;
};

// Bracket each root of psi^3 - psi - s between the stationary points +-1/sqrt 3.
inline Roots cubic_roots(double s) {
  auto f = [s](double x) { return x * x * x - x - s; };
  const double c = 1.0 / std::sqrt(3.0);
  return {bisect(f, -2.0, -c), bisect(f, -c, c), bisect(f, c, 2.0)};
}

inline double rho_star(double s) { return -3.0 * cubic_roots(s).d / std::sqrt(2.0); }

// gamma v / sqrt(1 - v^2) = rho solved in closed form, signed.
inline double steady_speed(double rho, double gamma) {
  const double k = rho / gamma;
  return k / std::sqrt(1.0 + k * k);
}

inline double kink(double s, double xi) {
  const auto r = cubic_roots(s);
  return r.a + (r.b - r.a) / (1.0 + std::exp((r.b - r.a) * xi / std::sqrt(2.0)));
}

// Consistent-law speed in physical units, written out directly.
inline double velocity_consistent(double M, double A, double gamma, double v0, double d) {
  return v0 / std::sqrt(1.0 + 2.0 * gamma * gamma / (9.0 * d * d * M * std::abs(A)));
}

// Density transported exactly by a harmonic flow: rotate the initial
// Gaussian centre by angle t and evaluate the blob there.
inline double rotated_gaussian(double g, double p, double g0, double p0, double w, double t) {
  const double c = std::cos(t), s = std::sin(t);
  // Backtrace (g, p) along dg/dt = p, dp/dt = -g.
  const double gb = c * g - s * p;
  const double pb = s * g + c * p;
  const double dg = gb - g0, dp = pb - p0;
  return std::exp(-(dg * dg + dp * dp) / (2.0 * w * w)) / (2.0 * M_PI * w * w);
}

// Generic RK4 backtrace for velocity fields given as callables.
inline void backtrace(const std::function<void(double, double, double&, double&)>& vel, double& g,
                      double& p, double t, int steps) {
  const double h = -t / steps;
  for (int k = 0; k < steps; ++k) {
    double a1, b1, a2, b2, a3, b3, a4, b4;
    vel(g, p, a1, b1);
    vel(g + 0.5 * h * a1, p + 0.5 * h * b1, a2, b2);
    vel(g + 0.5 * h * a2, p + 0.5 * h * b2, a3, b3);
    vel(g + h * a3, p + h * b3, a4, b4);
    g += h * (a1 + 2 * a2 + 2 * a3 + a4) / 6.0;
    p += h * (b1 + 2 * b2 + 2 * b3 + b4) / 6.0;
  }
}

// Seeded generator for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace oracle
