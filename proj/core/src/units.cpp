#include "mtlab/units.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab {

std::vector<ParamViolation> validate(const PhysicalParams& p) {
  std::vector<ParamViolation> out;
  auto check = [&](const char* field, double value, bool ok, const char* rule) {
    if (!std::isfinite(value)) {
      out.push_back({field, fmt::format("{} must be finite", field)});
    } else if (!ok) {
      out.push_back({field, fmt::format("{} = {} violates {}", field, value, rule)});
    }
  };
  check("M", p.M, p.M > 0.0, "M > 0");
  check("A", p.A, p.A < 0.0, "A < 0 (double-well potential)");
  check("B", p.B, p.B > 0.0, "B > 0");
  check("gamma", p.gamma, p.gamma >= 0.0, "gamma >= 0");
  check("q", p.q, true, "");
  check("E", p.E, true, "");
  check("v0", p.v0, p.v0 > 0.0, "v0 > 0");
  check("L", p.L, p.L > 0.0, "L > 0");
  return out;
}

void require_valid(const PhysicalParams& p) {
  const auto violations = validate(p);
  if (violations.empty()) return;
  std::string msg = "invalid physical parameters:";
  for (const auto& v : violations) msg += " " + v.message + ";";
  msg.pop_back();
  throw InvariantViolation(msg);
}

double reduced_forcing(const PhysicalParams& p) {
  require_valid(p);
  const double absA = std::abs(p.A);
  return p.q * std::sqrt(p.B) * p.E / (absA * std::sqrt(absA));
}

DimensionlessParams nondimensionalize(const PhysicalParams& p, double v) {
  require_valid(p);
  if (!(v > 0.0) || !(v < p.v0)) {
    throw DomainError(fmt::format(
        "velocity {} m/s outside the subsonic range (0, v0 = {})", v, p.v0));
  }
  DimensionlessParams out;
  out.sigma = reduced_forcing(p);
  out.rho = p.gamma * v / std::sqrt(p.M * std::abs(p.A) * (p.v0 * p.v0 - v * v));
  out.nu = v / p.v0;
  return out;
}

const std::vector<std::string_view>& physical_param_keys() {
  static const std::vector<std::string_view> keys = {"M", "A", "B", "gamma",
                                                     "q", "E", "v0", "L"};
  return keys;
}

PhysicalParams physical_params_from_config(const KeyValueFile& file,
                                           bool check_unknown) {
  if (check_unknown) file.require_known(physical_param_keys());
  PhysicalParams p;
  p.M = file.get_double("M");
  p.A = file.get_double("A");
  p.B = file.get_double("B");
  p.gamma = file.get_double("gamma");
  p.q = file.get_double("q");
  p.E = file.get_double("E");
  p.v0 = file.get_double("v0");
  p.L = file.get_double("L");
  const auto violations = validate(p);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ConfigError(file.source(), 0, v.message);
  }
  return p;
}

std::string to_config_text(const PhysicalParams& p) {
  return fmt::format(
      "M = {}\nA = {}\nB = {}\ngamma = {}\nq = {}\nE = {}\nv0 = {}\nL = {}\n",
      format_double(p.M), format_double(p.A), format_double(p.B),
      format_double(p.gamma), format_double(p.q), format_double(p.E),
      format_double(p.v0), format_double(p.L));
}

PhysicalParams reference_params() {
  PhysicalParams p;
  p.M = 5e-27;
  p.A = -1e-8;
  p.B = 9.765625;
  p.gamma = 5.741591759864457e-17;
  p.q = 3.2e-19;
  p.E = 1e5;
  p.v0 = 1000.0;
  p.L = 1e-6;
  return p;
}

}  // namespace mtlab
