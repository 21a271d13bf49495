#pragma once

#include <vector>

#include "mtlab/config_file.hpp"
#include "mtlab/report.hpp"
#include "mtlab/units.hpp"

namespace mtlab {

/// CODATA 2018 values (SI) and PDG particle masses.
namespace constants {
inline constexpr double kNewtonG = 6.67430e-11;          // m^3 kg^-1 s^-2
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kProtonMass = 1.67262192369e-27;  // kg
inline constexpr double kKaonMassMeV = 497.611;           // neutral kaon, MeV/c^2

/// sqrt(hbar c / G) in kg.
double planck_mass();
/// Neutral kaon mass in kg.
double kaon_mass();
}  // namespace constants

/// Typical kink speed quoted for biological microtubules [m/s].
inline constexpr double kReportedKinkSpeed = 2.0;

struct BrainScaleInputs {
  double tubulins_per_neuron = 1e8;
  double neurons = 1e11;
  double coherent_set = 1e12;        ///< N, tubulins in the coherent state
  double anchor_collapse_time = 1.0;  ///< seconds at anchor_N
  double anchor_N = 1e12;

  bool operator==(const BrainScaleInputs&) const = default;

  /// Throws InvariantViolation naming the first non-positive count.
  void validate() const;
};

/// Config keys for BrainScaleInputs; each is optional.
const std::vector<std::string_view>& brain_scale_keys();
BrainScaleInputs brain_scale_from_config(const KeyValueFile& file);

/// sqrt(G_N) m in natural units, i.e. m / M_Planck. Defaults to the proton.
double qg_dimensionless_scale(double mass_kg = constants::kProtonMass);

/// N / (tubulins_per_neuron * neurons).
double conscious_fraction(const BrainScaleInputs& in);

/// anchor_collapse_time * anchor_N / N: collapse time inversely
/// proportional to the number of coherent tubulins, pinned at the anchor.
double collapse_time(double N, const BrainScaleInputs& in);

struct TransferTimeReport {
  double L = 0.0;
  double sigma = 0.0;
  double d = 0.0;
  double v_literal = 0.0;        ///< literal velocity law
  double v_consistent = 0.0;   ///< friction-consistent velocity law
  double v_frictionless = 0.0;  ///< v0
  double t_literal = 0.0;
  double t_consistent = 0.0;
  double t_frictionless = 0.0;  ///< lower bound L / v0
  double t_reported_speed = 0.0;  ///< L / 2 m/s
  double velocity_relative_difference = 0.0;  ///< |v_literal - v_consistent| / v_consistent
  double mass_to_proton = 0.0;
};

TransferTimeReport transfer_time_report(const PhysicalParams& p);

/// Velocity-law comparison as report rows.
std::vector<ReportEntry> velocity_report_entries(const PhysicalParams& p);

/// Every headline number as report rows, in fixed order.
std::vector<ReportEntry> estimates_report_entries(const BrainScaleInputs& in,
                                                  const PhysicalParams& p);

}  // namespace mtlab
