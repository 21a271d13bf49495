#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtlab/estimates.hpp"
#include "mtlab/lattice.hpp"
#include "mtlab/liouville.hpp"
#include "mtlab/report.hpp"
#include "mtlab/units.hpp"

namespace mtlab::cli {

struct RootsCommand {
  double sigma = 0.0;
  bool operator==(const RootsCommand&) const = default;
};

struct KinkCommand {
  double sigma = 0.0;
  double xi_min = -10.0;
  double xi_max = 10.0;
  double step = 0.1;
  double center = 0.0;
  bool operator==(const KinkCommand&) const = default;
};

struct TwOdeCommand {
  std::optional<double> rho;  ///< defaults to the consistent friction
  double sigma = 0.0;
  double xi0 = -10.0;
  double xi1 = 10.0;
  double step = 0.01;
  std::optional<double> psi0;   ///< defaults to the kink at xi0
  std::optional<double> dpsi0;  ///< defaults to the kink slope at xi0
  bool operator==(const TwOdeCommand&) const = default;
};

struct SimulateCommand {
  std::string config_path;
  lattice::RunSpec spec;
  std::size_t snapshots_every = 0;  ///< 0: ten evenly spaced snapshots
  bool operator==(const SimulateCommand&) const = default;
};

struct SweepCommand {
  std::vector<double> sigmas;
  std::vector<double> gammas;
  unsigned threads = 0;  ///< 0: hardware concurrency
  double cells_per_width = 8.0;
  bool operator==(const SweepCommand&) const = default;
};

struct LiouvilleCommand {
  std::string config_path;
  liouville::LiouvilleSpec spec;
  std::size_t steps = 1000;
  std::size_t report_every = 0;  ///< 0: only the first and last step
  bool operator==(const LiouvilleCommand&) const = default;
};

struct VelocityCommand {
  std::string config_path;
  PhysicalParams params;
  ReportFormat format = ReportFormat::Text;
  bool operator==(const VelocityCommand&) const = default;
};

struct EstimatesCommand {
  std::optional<std::string> config_path;
  BrainScaleInputs brain;
  PhysicalParams params = reference_params();
  ReportFormat format = ReportFormat::Text;
  bool operator==(const EstimatesCommand&) const = default;
};

using Command = std::variant<RootsCommand, KinkCommand, TwOdeCommand, SimulateCommand,
                             SweepCommand, LiouvilleCommand, VelocityCommand, EstimatesCommand>;

struct RunConfig {
  Command command;
  std::optional<std::string> out_dir;  ///< simulate, sweep, liouville only
  bool operator==(const RunConfig&) const = default;
};

/// Thrown by parse_args for --help; carries the rendered help text.
struct HelpRequested {
  std::string text;
};

/// Parses arguments (without the program name). Throws UsageError naming
/// the offending flag, or ConfigError for unreadable/invalid config files.
RunConfig parse_args(const std::vector<std::string>& args);

/// Arguments that parse back to `config` (given unchanged config files).
std::vector<std::string> emit_args(const RunConfig& config);

/// "mtlab" followed by the arguments, space separated.
std::string invocation_string(const std::vector<std::string>& args);

/// Output directory: --out-dir, else $MTLAB_OUT_DIR, else ".".
std::string resolve_out_dir(const RunConfig& config);

/// Executes `config`. Returns 0 on success; on failure writes one line
/// `mtlab: error kind=<kind> exit=<code>: <message>` to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err,
        std::string_view invocation);

/// 1 usage, 2 config, 3 numeric domain, 4 runtime failure.
int exit_code_for(const std::exception& e);

/// Full entry point used by the executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtlab::cli
