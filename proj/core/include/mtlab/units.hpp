#pragma once

#include <string>
#include <vector>

#include "mtlab/config_file.hpp"

namespace mtlab {

/// Dimensional constants of the dimer chain.
///
/// A, B and gamma are coefficients in the dimer model's own unit system;
/// only their signs are checked. The remaining fields are SI.
struct PhysicalParams {
  double M = 0.0;      ///< effective dimer mass [kg]
  double A = 0.0;      ///< quadratic potential coefficient, < 0 (double well)
  double B = 0.0;      ///< quartic potential coefficient, > 0
  double gamma = 0.0;  ///< viscous damping coefficient, >= 0
  double q = 0.0;      ///< mobile charge [C]
  double E = 0.0;      ///< axial electric field [V/m]
  double v0 = 0.0;     ///< sound velocity [m/s]
  double L = 0.0;      ///< microtubule length [m]

  bool operator==(const PhysicalParams&) const = default;
};

/// Reduced constants of the traveling-wave equation
/// psi'' + rho psi' - psi^3 + psi + sigma = 0.
struct DimensionlessParams {
  double rho = 0.0;    ///< reduced friction
  double sigma = 0.0;  ///< reduced forcing
  double nu = 0.0;     ///< v / v0

  bool operator==(const DimensionlessParams&) const = default;
};

struct ParamViolation {
  std::string field;
  std::string message;
};

/// Empty iff every invariant of `p` holds.
std::vector<ParamViolation> validate(const PhysicalParams& p);

/// Throws InvariantViolation listing every offending field.
void require_valid(const PhysicalParams& p);

/// sigma = q sqrt(B) |A|^(-3/2) E.
double reduced_forcing(const PhysicalParams& p);

/// Reduced constants for a kink moving at `v` (0 < v < v0). Uses
/// rho = gamma v / sqrt(M |A| (v0^2 - v^2)), the real subsonic branch.
DimensionlessParams nondimensionalize(const PhysicalParams& p, double v);

/// Config keys, in canonical order: M, A, B, gamma, q, E, v0, L.
const std::vector<std::string_view>& physical_param_keys();

/// All eight keys are required; unknown keys are rejected unless the caller
/// has already checked them (`check_unknown = false`).
PhysicalParams physical_params_from_config(const KeyValueFile& file,
                                           bool check_unknown = true);
std::string to_config_text(const PhysicalParams& p);

/// The bundled reference set: sigma ~ 0.1 and a literal velocity-law speed
/// of 2 m/s on a 1 um microtubule. Mirrors configs/reference.cfg.
PhysicalParams reference_params();

}  // namespace mtlab
