#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtlab/config_file.hpp"

/// Transport of a phase-space density rho(g, p) over one coupling g and its
/// conjugate momentum p:
///
///   d_t rho = -{rho, H}_PB                 (Hamiltonian mode)
///   d_t rho = -{rho, H}_PB + beta G d_p rho (modified mode)
///
/// Both are written in conservative form. The Hamiltonian velocity
/// (dH/dp, -dH/dg) is differenced from H at cell corners, so its discrete
/// divergence vanishes; the extra drift -beta(g) G(g) in p does not depend
/// on p, so it is divergence-free as well.
namespace mtlab::liouville {

struct Domain {
  double g_min = -1.0, g_max = 1.0;
  double p_min = -1.0, p_max = 1.0;
  std::size_t n_g = 0, n_p = 0;

  bool operator==(const Domain&) const = default;
  double dg() const { return (g_max - g_min) / static_cast<double>(n_g); }
  double dp() const { return (p_max - p_min) / static_cast<double>(n_p); }
};

/// Dense polynomial c0 + c1 x + c2 x^2 + ...
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  bool operator==(const Polynomial&) const = default;
};

struct CouplingModel {
  std::function<double(double g, double p)> hamiltonian;
  std::function<double(double g)> beta;
  std::function<double(double g)> metric;  ///< must be > 0 on the domain
  Domain domain;

  /// H = kinetic p^2/2 + potential(g).
  static CouplingModel separable(double kinetic, Polynomial potential,
                                 Polynomial beta, Polynomial metric, Domain domain);
};

/// Cell-averaged density. Cell (i, j) covers
/// [g_min + i dg, g_min + (i+1) dg] x [p_min + j dp, p_min + (j+1) dp].
/// The outermost ring of cells is held at zero.
struct DensityGrid {
  Domain domain;
  std::vector<double> values;  ///< row-major in g: values[i * n_p + j]
  double time = 0.0;

  double dg() const { return domain.dg(); }
  double dp() const { return domain.dp(); }
  double g_center(std::size_t i) const;
  double p_center(std::size_t j) const;
  double& at(std::size_t i, std::size_t j) { return values[i * domain.n_p + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * domain.n_p + j]; }
};

/// Normalized Gaussian sampled at cell centres with the boundary ring zeroed.
DensityGrid gaussian_blob(const Domain& domain, double g0, double p0, double width);

enum class Scheme {
  Upwind,   ///< first-order donor cell
  Limited,  ///< second-order van Leer flux limiter
};

Scheme parse_scheme(std::string_view s);
std::string_view to_string(Scheme s);

/// Precomputed face velocities for one model and mode. Each step is a
/// Strang split g/2, p, g/2 of one-dimensional conservative sweeps.
class Evolver {
 public:
  /// Throws InvariantViolation if the metric is not positive on the domain.
  Evolver(const CouplingModel& model, bool modified, Scheme scheme = Scheme::Limited);

  /// max|u_g| + max|u_p| over all faces.
  double max_characteristic_speed() const noexcept { return max_speed_; }
  /// Largest dt with dt * speed <= 0.8 min(dg, dp).
  double max_stable_dt() const noexcept;

  /// Throws StabilityViolation or NegativeDensity.
  void evolve(DensityGrid& grid, double dt) const;

  const Domain& domain() const noexcept { return domain_; }

 private:
  void sweep_g(std::vector<double>& rho, double dt) const;
  void sweep_p(std::vector<double>& rho, double dt) const;

  Domain domain_;
  Scheme scheme_;
  std::vector<double> u_g_;  ///< (n_g + 1) x n_p, face i between cells i-1 and i
  std::vector<double> u_p_;  ///< n_g x (n_p + 1)
  double max_speed_ = 0.0;
  mutable std::vector<double> line_;
  mutable std::vector<double> flux_;
};

/// One step of the Hamiltonian (modified = false) or modified flow.
DensityGrid evolve(const DensityGrid& grid, const CouplingModel& model, double dt,
                   bool modified, Scheme scheme = Scheme::Limited);

/// Sum of rho dg dp.
double total_probability(const DensityGrid& grid);

/// -Sum rho ln(rho) dg dp over cells with rho > 0.
double entropy(const DensityGrid& grid);

/// Run description read from a text config.
struct LiouvilleSpec {
  Domain domain;
  double kinetic = 1.0;
  Polynomial potential;
  Polynomial beta;
  Polynomial metric{{1.0}};
  bool modified = false;
  Scheme scheme = Scheme::Limited;
  std::optional<double> dt;  ///< defaults to the stability limit
  double blob_g = 0.0, blob_p = 0.0, blob_width = 0.25;

  bool operator==(const LiouvilleSpec&) const = default;

  /// Keys: g_min g_max p_min p_max n_g n_p (required); kinetic, potential,
  /// beta, metric, modified, scheme, dt, blob_g, blob_p, blob_width.
  static LiouvilleSpec from_config(const KeyValueFile& file);
  std::string to_config_text() const;

  CouplingModel model() const;
  DensityGrid initial_grid() const;
};

}  // namespace mtlab::liouville
