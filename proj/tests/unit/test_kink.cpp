#include <doctest.h>

#include <cmath>
#include <vector>

#include "mtlab/error.hpp"
#include "mtlab/kink.hpp"
#include "mtlab/tw_ode.hpp"
#include "mtlab/units.hpp"
#include "support/oracles.hpp"

using namespace mtlab;

namespace {
std::vector<double> grid(double lo, double hi, double h) {
  std::vector<double> xs;
  for (int i = 0; lo + i * h <= hi + 1e-12; ++i) xs.push_back(lo + i * h);
  return xs;
}
}  // namespace

TEST_SUITE("kink") {
  TEST_CASE("zero forcing kink is -tanh(xi / sqrt 2)") {
    const auto k = KinkProfile::from_sigma(0.0);
    double worst = 0.0;
    for (double xi : grid(-10, 10, 0.01)) {
      worst = std::max(worst, std::abs(kink_value(k, xi) + std::tanh(xi / std::sqrt(2.0))));
    }
    CHECK(worst < 1e-12);
    CHECK(kink_value(k, 0.0) == 0.0);
    CHECK(kink_value(k, std::sqrt(2.0)) == doctest::Approx(-0.7615941559557649).epsilon(1e-14));
  }

  TEST_CASE("profile matches oracle formula") {
    for (double s : {-0.2, 0.05, 0.3}) {
      const auto k = KinkProfile::from_sigma(s);
      for (double xi : {-7.0, -1.0, 0.0, 0.3, 4.0}) {
        CHECK(kink_value(k, xi) == doctest::Approx(oracle::kink(s, xi)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("limits, centre and extreme arguments") {
    const auto k = KinkProfile::from_sigma(0.2, 3.0);
    CHECK(kink_value(k, 3.0) == doctest::Approx(0.5 * (k.roots.a + k.roots.b)));
    CHECK(kink_value(k, -1e6) == doctest::Approx(k.roots.b).epsilon(1e-15));
    CHECK(kink_value(k, 1e6) == k.roots.a);
    CHECK(std::isfinite(kink_slope(k, 1e6)));
    CHECK(std::isfinite(kink_curvature(k, -1e6)));
  }

  TEST_CASE("rate and width") {
    const auto k = KinkProfile::from_sigma(0.0);
    CHECK(k.rate() == doctest::Approx(std::sqrt(2.0)));
    CHECK(k.width() == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  TEST_CASE("profile is strictly decreasing and bounded between a and b") {
    oracle::Rng rng(11);
    for (int t = 0; t < 50; ++t) {
      const auto k = KinkProfile::from_sigma(rng.uniform(-0.38, 0.38));
      double prev = kink_value(k, -15.0);
      for (double xi : grid(-14.9, 15, 0.1)) {
        const double v = kink_value(k, xi);
        CHECK(v < prev);
        CHECK(v > k.roots.a);
        CHECK(v < k.roots.b);
        prev = v;
      }
    }
  }

  TEST_CASE("closed-form derivatives agree with finite differences") {
    const auto k = KinkProfile::from_sigma(0.15, -0.4);
    const double h = 1e-5;
    for (double xi : {-3.0, -0.4, 0.0, 2.5}) {
      const double fd1 = (kink_value(k, xi + h) - kink_value(k, xi - h)) / (2 * h);
      const double fd2 = (kink_slope(k, xi + h) - kink_slope(k, xi - h)) / (2 * h);
      CHECK(kink_slope(k, xi) == doctest::Approx(fd1).epsilon(1e-8));
      CHECK(kink_curvature(k, xi) == doctest::Approx(fd2).epsilon(1e-7));
    }
  }

  TEST_CASE("consistent friction") {
    CHECK(consistent_rho(solve_cubic(0.0)) == 0.0);
    CHECK(consistent_rho(solve_cubic(0.1)) == doctest::Approx(0.2143196626784087).epsilon(1e-13));
    CHECK(consistent_rho(solve_cubic(0.2)) == doctest::Approx(0.44367170703063724).epsilon(1e-13));
    CHECK(consistent_rho(solve_cubic(0.1)) == doctest::Approx(oracle::rho_star(0.1)).epsilon(1e-12));
    CHECK(consistent_rho(solve_cubic(-0.1)) < 0.0);
  }

  TEST_CASE("analytic kink solves the traveling-wave equation at rho*") {
    const auto xs = grid(-10, 10, 0.05);
    for (double s : {0.0, 0.1, 0.2, 0.3, -0.3}) {
      const auto k = KinkProfile::from_sigma(s);
      CAPTURE(s);
      CHECK(traveling_wave_residual(k, consistent_rho(k.roots), s, xs) < 1e-9);
    }
    CHECK(traveling_wave_residual(KinkProfile::from_sigma(0.0), 0.0, 0.0, xs) < 1e-12);
    CHECK(traveling_wave_residual(KinkProfile::from_sigma(0.0), 1.0, 0.0, xs) > 0.1);
  }

  TEST_CASE("residual property: random forcing and centre") {
    oracle::Rng rng(99);
    const auto xs = grid(-12, 12, 0.1);
    for (int t = 0; t < 100; ++t) {
      const double s = rng.uniform(-0.38, 0.38);
      const auto k = KinkProfile::from_sigma(s, rng.uniform(-2, 2));
      CHECK(traveling_wave_residual(k, consistent_rho(k.roots), s, xs) < 1e-9);
    }
  }
}

TEST_SUITE("velocity") {
  TEST_CASE("literal law reproduces the reference speed") {
    const auto p = reference_params();
    const auto r = solve_cubic(reduced_forcing(p));
    CHECK(velocity_literal(p, r.d) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("literal law tends to v0 without friction") {
    auto p = reference_params();
    p.gamma = 0.0;
    CHECK(velocity_literal(p, -0.1) == p.v0);
    CHECK_THROWS_AS(velocity_literal(p, 0.0), SingularVelocity);
  }

  TEST_CASE("consistent law matches closed-form oracle") {
    auto p = reference_params();
    const auto r = solve_cubic(reduced_forcing(p));
    const double v = velocity_consistent(p, r);
    CHECK(v == doctest::Approx(oracle::velocity_consistent(p.M, p.A, p.gamma, p.v0, r.d)).epsilon(1e-12));
    CHECK(v == doctest::Approx(26.38538777377314).epsilon(1e-12));
    const auto dim = nondimensionalize(p, v);
    CHECK(dim.rho == doctest::Approx(std::abs(consistent_rho(r))).epsilon(1e-12));
  }

  TEST_CASE("consistent law property over friction") {
    oracle::Rng rng(5);
    auto p = reference_params();
    for (int t = 0; t < 100; ++t) {
      p.gamma = std::pow(10.0, rng.uniform(-20, -12));
      const auto r = solve_cubic(rng.uniform(0.01, 0.38));
      const double v = velocity_consistent(p, r);
      CHECK(v > 0.0);
      CHECK(v < p.v0);
      CHECK(v == doctest::Approx(oracle::velocity_consistent(p.M, p.A, p.gamma, p.v0, r.d)).epsilon(1e-10));
    }
  }

  TEST_CASE("consistent law errors") {
    auto p = reference_params();
    const auto r = solve_cubic(0.1);
    p.gamma = 0.0;
    CHECK_THROWS_AS(velocity_consistent(p, r), NoRoot);
    CHECK_THROWS_AS(velocity_consistent(reference_params(), solve_cubic(0.0)), NoRoot);
  }

  TEST_CASE("subsonic speed") {
    CHECK(subsonic_speed_for(0.0) == 0.0);
    CHECK(subsonic_speed_for(1.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(subsonic_speed_for(1e6) < 1.0);
    CHECK_THROWS_AS(subsonic_speed_for(-1.0), DomainError);
  }

  TEST_CASE("transfer time") {
    CHECK(transfer_time(1e-6, 2.0) == 5e-7);
    CHECK_THROWS_AS(transfer_time(1e-6, 0.0), DomainError);
    CHECK_THROWS_AS(transfer_time(0.0, 2.0), DomainError);
  }
}
