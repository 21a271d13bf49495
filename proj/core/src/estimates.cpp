#include "mtlab/estimates.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mtlab/cubic.hpp"
#include "mtlab/error.hpp"
#include "mtlab/kink.hpp"

namespace mtlab {

namespace constants {

double planck_mass() { return std::sqrt(kHbar * kSpeedOfLight / kNewtonG); }

double kaon_mass() {
  return kKaonMassMeV * 1e6 * kElementaryCharge / (kSpeedOfLight * kSpeedOfLight);
}

}  // namespace constants

void BrainScaleInputs::validate() const {
  auto check = [](const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvariantViolation(fmt::format("{} must be positive, got {}", name, v));
    }
  };
  check("tubulins_per_neuron", tubulins_per_neuron);
  check("neurons", neurons);
  check("coherent_set", coherent_set);
  check("anchor_collapse_time", anchor_collapse_time);
  check("anchor_N", anchor_N);
}

const std::vector<std::string_view>& brain_scale_keys() {
  static const std::vector<std::string_view> keys = {
      "tubulins_per_neuron", "neurons", "coherent_set", "anchor_collapse_time", "anchor_N"};
  return keys;
}

BrainScaleInputs brain_scale_from_config(const KeyValueFile& file) {
  BrainScaleInputs in;
  in.tubulins_per_neuron = file.get_double_or("tubulins_per_neuron", in.tubulins_per_neuron);
  in.neurons = file.get_double_or("neurons", in.neurons);
  in.coherent_set = file.get_double_or("coherent_set", in.coherent_set);
  in.anchor_collapse_time = file.get_double_or("anchor_collapse_time", in.anchor_collapse_time);
  in.anchor_N = file.get_double_or("anchor_N", in.anchor_N);
  try {
    in.validate();
  } catch (const InvariantViolation& e) {
    throw ConfigError(file.source(), 0, e.what());
  }
  return in;
}

double qg_dimensionless_scale(double mass_kg) {
  return mass_kg / constants::planck_mass();
}

double conscious_fraction(const BrainScaleInputs& in) {
  in.validate();
  return in.coherent_set / (in.tubulins_per_neuron * in.neurons);
}

double collapse_time(double N, const BrainScaleInputs& in) {
  in.validate();
  if (!(N > 0.0)) throw DomainError(fmt::format("N must be positive, got {}", N));
  return in.anchor_collapse_time * (in.anchor_N / N);
}

TransferTimeReport transfer_time_report(const PhysicalParams& p) {
  require_valid(p);
  TransferTimeReport r;
  r.L = p.L;
  r.sigma = reduced_forcing(p);
  const CubicRoots roots = solve_cubic(r.sigma);
  r.d = roots.d;
  r.v_literal = velocity_literal(p, roots.d);
  r.v_consistent = velocity_consistent(p, roots);
  r.v_frictionless = p.v0;
  r.t_literal = transfer_time(p.L, r.v_literal);
  r.t_consistent = transfer_time(p.L, r.v_consistent);
  r.t_frictionless = transfer_time(p.L, p.v0);
  r.t_reported_speed = transfer_time(p.L, kReportedKinkSpeed);
  r.velocity_relative_difference = std::abs(r.v_literal - r.v_consistent) / r.v_consistent;
  r.mass_to_proton = p.M / constants::kProtonMass;
  return r;
}

std::vector<ReportEntry> velocity_report_entries(const PhysicalParams& p) {
  const auto r = transfer_time_report(p);
  const bool disagree = r.velocity_relative_difference > 1e-6;
  return {
      {"L", r.L, "m", Source::Input, ""},
      {"sigma", r.sigma, "", Source::Derived, "q sqrt(B) |A|^-3/2 E"},
      {"root_d", r.d, "", Source::Derived, "middle root of psi^3 - psi - sigma"},
      {"v_literal", r.v_literal, "m/s", Source::Derived,
       "v0 [1 + 2 gamma / (9 d^2 M v0^2)]^-1/2"},
      {"v_consistent", r.v_consistent, "m/s", Source::Derived,
       "v0 [1 + 2 gamma^2 / (9 d^2 M |A|)]^-1/2"},
      {"velocity_relative_difference", r.velocity_relative_difference, "", Source::Derived,
       disagree ? "FLAG: velocity laws disagree (gamma vs gamma^2, v0^2 vs |A|)"
                : "velocity laws agree"},
      {"t_transfer_literal", r.t_literal, "s", Source::Derived, "L / v_literal"},
      {"t_transfer_consistent", r.t_consistent, "s", Source::Derived, "L / v_consistent"},
      {"t_transfer_frictionless", r.t_frictionless, "s", Source::Derived, "lower bound L / v0"},
      {"v_reported", kReportedKinkSpeed, "m/s", Source::Reported, "typical biological kink speed"},
      {"t_transfer_reported_speed", r.t_reported_speed, "s", Source::Derived,
       "L / v_reported; reported value 5e-7 s"},
  };
}

std::vector<ReportEntry> estimates_report_entries(const BrainScaleInputs& in,
                                                  const PhysicalParams& p) {
  in.validate();
  std::vector<ReportEntry> out = {
      {"planck_mass", constants::planck_mass(), "kg", Source::Derived, "sqrt(hbar c / G)"},
      {"qg_scale_proton", qg_dimensionless_scale(), "", Source::Derived,
       "sqrt(G_N) m_p = m_p / M_Planck; reported order 1e-19"},
      {"qg_scale_kaon", qg_dimensionless_scale(constants::kaon_mass()), "", Source::Derived,
       "m_K / M_Planck; reported order 1e-19"},
      {"tubulins_per_neuron", in.tubulins_per_neuron, "", Source::Reported, ""},
      {"neurons", in.neurons, "", Source::Reported, ""},
      {"coherent_set", in.coherent_set, "", Source::Reported, "N"},
      {"conscious_fraction", conscious_fraction(in), "", Source::Derived,
       "N / (tubulins_per_neuron * neurons); reported 1e-7"},
      {"collapse_time", collapse_time(in.coherent_set, in), "s", Source::Modeling,
       "anchor_time * anchor_N / N (inverse-N scaling is a modeling choice)"},
      {"collapse_time_anchor_N", in.anchor_N, "", Source::Reported, ""},
      {"collapse_time_anchor", in.anchor_collapse_time, "s", Source::Reported, ""},
  };
  for (auto& e : velocity_report_entries(p)) out.push_back(std::move(e));
  out.push_back({"dimer_mass", p.M, "kg", Source::Input, "reported order 5e-27 kg"});
  out.push_back({"dimer_to_proton_mass", p.M / constants::kProtonMass, "", Source::Derived,
                 "effective dimer mass is about one proton mass"});
  return out;
}

}  // namespace mtlab
