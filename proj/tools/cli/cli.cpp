#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mtlab/config_file.hpp"
#include "mtlab/csv.hpp"
#include "mtlab/cubic.hpp"
#include "mtlab/error.hpp"
#include "mtlab/kink.hpp"
#include "mtlab/tw_ode.hpp"
#include "mtlab/version.hpp"

namespace mtlab::cli {
namespace fs = std::filesystem;

namespace {

std::vector<double> parse_list_flag(const std::string& text, std::string_view flag) {
  try {
    auto values = parse_double_list(text, flag);
    if (values.empty()) throw UsageError(fmt::format("{}: empty list", flag));
    return values;
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

ReportFormat parse_format_flag(const std::string& text) { return parse_report_format(text); }

template <class T>
void push_opt(std::vector<std::string>& out, std::string_view flag, const std::optional<T>& v) {
  if (v) {
    out.emplace_back(flag);
    out.push_back(format_double(*v));
  }
}

void push(std::vector<std::string>& out, std::string_view flag, double v) {
  out.emplace_back(flag);
  out.push_back(format_double(v));
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw RuntimeFailure(fmt::format("cannot write output file {}", path.string()));
  return f;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure(fmt::format("cannot create output directory {}: {}", dir, ec.message()));
  return fs::path(dir);
}

// ---------------------------------------------------------------------------

void run_roots(const RootsCommand& c, std::ostream& out, std::string_view inv) {
  const auto r = solve_cubic(c.sigma);
  CsvWriter csv(out, inv, {"sigma", "a", "b", "d"});
  csv.row({r.sigma, r.a, r.b, r.d});
}

void run_kink(const KinkCommand& c, std::ostream& out, std::string_view inv) {
  if (!(c.step > 0.0) || !(c.xi_max >= c.xi_min)) {
    throw DomainError("kink grid needs step > 0 and xi-max >= xi-min");
  }
  const auto profile = KinkProfile::from_sigma(c.sigma, c.center);
  CsvWriter csv(out, inv, {"xi", "psi"});
  const auto n = static_cast<std::size_t>(std::floor((c.xi_max - c.xi_min) / c.step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = c.xi_min + static_cast<double>(i) * c.step;
    csv.row({xi, kink_value(profile, xi)});
  }
}

void run_tw_ode(const TwOdeCommand& c, std::ostream& out, std::string_view inv) {
  const auto profile = KinkProfile::from_sigma(c.sigma);
  const double rho = c.rho.value_or(consistent_rho(profile.roots));
  const double psi0 = c.psi0.value_or(kink_value(profile, c.xi0));
  const double dpsi0 = c.dpsi0.value_or(kink_slope(profile, c.xi0));
  const auto traj = integrate_traveling_wave(rho, c.sigma, psi0, dpsi0, c.xi0, c.xi1, c.step);
  const std::vector<std::string> notes = {
      fmt::format("rho = {}, sigma = {}; residual = psi - analytic kink", format_double(rho),
                  format_double(c.sigma))};
  CsvWriter csv(out, inv, {"xi", "psi", "dpsi", "residual"}, notes);
  for (std::size_t i = 0; i < traj.xi.size(); ++i) {
    csv.row({traj.xi[i], traj.psi[i], traj.dpsi[i], traj.psi[i] - kink_value(profile, traj.xi[i])});
  }
}

void run_simulate(const SimulateCommand& c, const fs::path& dir, std::ostream& out,
                  std::string_view inv) {
  const auto& spec = c.spec;
  const std::size_t every =
      c.snapshots_every > 0 ? c.snapshots_every : std::max<std::size_t>(1, spec.steps / 10);

  auto fields_file = open_output(dir / "fields.csv");
  CsvWriter fields(fields_file, inv, {"tau", "chi", "psi"});
  auto observer = [&](const lattice::State& s, std::size_t k) {
    if (k % every != 0 && k != spec.steps) return;
    for (std::size_t i = 0; i < s.size(); ++i) fields.row({s.tau, s.position(i), s.psi[i]});
  };
  const auto trace = lattice::simulate(spec, observer);

  auto front_file = open_output(dir / "front.csv");
  const std::vector<std::string> notes = {
      fmt::format("fitted_speed = {}, fit_residual = {}, fit from sample {}",
                  format_double(trace.fitted_speed), format_double(trace.fit_residual),
                  trace.fit_begin)};
  CsvWriter front(front_file, inv, {"tau", "position"}, notes);
  for (std::size_t i = 0; i < trace.times.size(); ++i) front.row({trace.times[i], trace.positions[i]});

  std::vector<ReportEntry> report = {
      {"measured_speed", trace.fitted_speed, "", Source::Derived, "least-squares front slope"},
      {"fit_residual", trace.fit_residual, "", Source::Derived, "RMS of the linear fit"},
  };
  try {
    report.push_back({"predicted_speed", lattice::predicted_speed(spec.sigma, spec.gamma_t), "",
                      Source::Derived, "gamma_t v / sqrt(1 - v^2) = rho*"});
  } catch (const NoRoot&) {
    // Undamped forced runs have no steady speed to compare against.
  }
  write_report(out, report, ReportFormat::Text, inv);
}

std::string cell_file_name(double sigma, double gamma) {
  return fmt::format("cell_sigma{}_gamma{}.csv", format_double(sigma), format_double(gamma));
}

struct SummaryRow {
  double sigma, gamma_t, predicted_v, measured_v, rel_err;
};

SummaryRow read_cell_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw RuntimeFailure(fmt::format("cannot read sweep cell file {}", path.string()));
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto v = parse_double_list(line, path.string());
    if (v.size() != 5) break;
    return {v[0], v[1], v[2], v[3], v[4]};
  }
  throw RuntimeFailure(fmt::format("malformed sweep cell file {}", path.string()));
}

const std::vector<std::string> kSummaryColumns = {"sigma", "gamma_t", "predicted_v", "measured_v",
                                                  "rel_err"};

void run_sweep(const SweepCommand& c, const fs::path& dir, std::ostream& out, std::string_view inv) {
  const fs::path cells_dir = prepare_dir((dir / "sweep_cells").string());
  const unsigned threads =
      c.threads > 0 ? c.threads : std::max(1u, std::thread::hardware_concurrency());

  // Each worker owns its cell file; nothing else is shared while running.
  auto write_cell = [&](const lattice::SweepCell& cell) {
    auto f = open_output(cells_dir / cell_file_name(cell.sigma, cell.gamma_t));
    CsvWriter csv(f, inv, kSummaryColumns);
    csv.row({cell.sigma, cell.gamma_t, cell.predicted_v, cell.measured_v, cell.rel_err});
  };
  const auto cells = lattice::run_sweep(c.sigmas, c.gammas, threads, c.cells_per_width, write_cell);

  std::vector<SummaryRow> rows;
  for (const auto& cell : cells) {
    rows.push_back(read_cell_file(cells_dir / cell_file_name(cell.sigma, cell.gamma_t)));
  }
  std::sort(rows.begin(), rows.end(), [](const SummaryRow& l, const SummaryRow& r) {
    return l.sigma != r.sigma ? l.sigma < r.sigma : l.gamma_t < r.gamma_t;
  });

  std::ostringstream summary;
  {
    CsvWriter csv(summary, inv, kSummaryColumns);
    for (const auto& r : rows) csv.row({r.sigma, r.gamma_t, r.predicted_v, r.measured_v, r.rel_err});
  }
  auto f = open_output(dir / "sweep_summary.csv");
  f << summary.str();
  out << summary.str();
}

void write_density(const fs::path& path, const liouville::DensityGrid& grid, std::string_view inv) {
  auto f = open_output(path);
  const std::vector<std::string> notes = {fmt::format("t = {}", format_double(grid.time))};
  CsvWriter csv(f, inv, {"g", "p", "rho"}, notes);
  for (std::size_t i = 0; i < grid.domain.n_g; ++i)
    for (std::size_t j = 0; j < grid.domain.n_p; ++j)
      csv.row({grid.g_center(i), grid.p_center(j), grid.at(i, j)});
}

void run_liouville(const LiouvilleCommand& c, const fs::path& dir, std::ostream& out,
                   std::string_view inv) {
  const auto& spec = c.spec;
  const liouville::Evolver evolver(spec.model(), spec.modified, spec.scheme);
  const double dt = spec.dt.value_or(evolver.max_stable_dt());
  if (!std::isfinite(dt)) throw DomainError("dt must be given when the flow field vanishes");
  const std::size_t every = c.report_every > 0 ? c.report_every : c.steps;

  auto grid = spec.initial_grid();
  auto diag_file = open_output(dir / "diagnostics.csv");
  const std::vector<std::string> notes = {
      fmt::format("dt = {}, scheme = {}, modified = {}", format_double(dt),
                  liouville::to_string(spec.scheme), spec.modified)};
  CsvWriter diag(diag_file, inv, {"t", "total_probability", "entropy"}, notes);

  const double p0 = liouville::total_probability(grid);
  const double s0 = liouville::entropy(grid);
  auto report = [&](std::size_t k) {
    write_density(dir / fmt::format("density_t{:06d}.csv", k), grid, inv);
    diag.row({grid.time, liouville::total_probability(grid), liouville::entropy(grid)});
  };
  report(0);
  for (std::size_t k = 1; k <= c.steps; ++k) {
    evolver.evolve(grid, dt);
    if (k % every == 0 || k == c.steps) report(k);
  }

  const double p1 = liouville::total_probability(grid);
  write_report(out,
               {{"steps", static_cast<double>(c.steps), "", Source::Input, ""},
                {"dt", dt, "", Source::Derived, ""},
                {"final_time", grid.time, "", Source::Derived, ""},
                {"probability_drift", std::abs(p1 - p0), "", Source::Derived, "|P(t) - P(0)|"},
                {"entropy_initial", s0, "", Source::Derived, ""},
                {"entropy_final", liouville::entropy(grid), "", Source::Derived, ""}},
               ReportFormat::Text, inv);
}

// ---------------------------------------------------------------------------

lattice::RunSpec load_run_spec(const std::string& path) {
  return lattice::RunSpec::from_config(KeyValueFile::load(path));
}

liouville::LiouvilleSpec load_liouville_spec(const std::string& path) {
  return liouville::LiouvilleSpec::from_config(KeyValueFile::load(path));
}

PhysicalParams load_physical(const std::string& path) {
  return physical_params_from_config(KeyValueFile::load(path));
}

void load_estimates(EstimatesCommand& cmd) {
  const auto file = KeyValueFile::load(*cmd.config_path);
  std::vector<std::string_view> allowed = brain_scale_keys();
  const auto& phys = physical_param_keys();
  allowed.insert(allowed.end(), phys.begin(), phys.end());
  file.require_known(allowed);
  cmd.brain = brain_scale_from_config(file);
  const bool any_physical = std::any_of(phys.begin(), phys.end(),
                                        [&](std::string_view k) { return file.contains(k); });
  if (any_physical) cmd.params = physical_params_from_config(file, false);
}

// CLI11 reports missing required options before unknown ones; check names
// first so a misspelt flag is what the user sees.
void reject_unknown_names(CLI::App& app, const std::vector<std::string>& args) {
  if (args.empty() || args[0].rfind("-", 0) == 0) return;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound&) {
    throw UsageError(fmt::format("unknown subcommand '{}'", args[0]));
  }
  for (std::size_t i = 1; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) != 0 || a == "--") continue;
    const std::string name = a.substr(0, a.find('='));
    if (!sub->get_option_no_throw(name) && !app.get_option_no_throw(name)) {
      throw UsageError(fmt::format("unknown option {} for '{}'", name, args[0]));
    }
  }
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Dimer-chain kink and phase-space flow laboratory", "mtlab"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  RootsCommand roots;
  auto* roots_app = app.add_subcommand("roots", "Real roots a < d < b of psi^3 - psi - sigma");
  roots_app->add_option("--sigma", roots.sigma, "Reduced forcing")->required();

  KinkCommand kink;
  auto* kink_app = app.add_subcommand("kink", "Sample the analytic kink profile");
  kink_app->add_option("--sigma", kink.sigma, "Reduced forcing")->required();
  kink_app->add_option("--xi-min", kink.xi_min, "First sample")->capture_default_str();
  kink_app->add_option("--xi-max", kink.xi_max, "Last sample")->capture_default_str();
  kink_app->add_option("--step", kink.step, "Sample spacing")->capture_default_str();
  kink_app->add_option("--center", kink.center, "Kink center")->capture_default_str();

  TwOdeCommand tw;
  auto* tw_app = app.add_subcommand("tw-ode", "Integrate the traveling-wave ODE with RK4");
  tw_app->add_option("--rho", tw.rho, "Friction (default: consistent value)");
  tw_app->add_option("--sigma", tw.sigma, "Reduced forcing")->required();
  tw_app->add_option("--xi0", tw.xi0, "Start of the span")->capture_default_str();
  tw_app->add_option("--xi1", tw.xi1, "End of the span")->capture_default_str();
  tw_app->add_option("--step", tw.step, "Integration step")->capture_default_str();
  tw_app->add_option("--psi0", tw.psi0, "Initial psi (default: kink at xi0)");
  tw_app->add_option("--dpsi0", tw.dpsi0, "Initial psi' (default: kink slope at xi0)");

  std::optional<std::string> out_dir;
  std::string sim_config;
  std::size_t snapshots_every = 0;
  auto* sim_app = app.add_subcommand("simulate", "Space-time lattice run with front tracking");
  sim_app->add_option("--config", sim_config, "Run configuration file")->required();
  sim_app->add_option("--snapshots-every", snapshots_every, "Steps between field snapshots");
  sim_app->add_option("--out-dir", out_dir, "Output directory");

  std::string sigma_list, gamma_list;
  SweepCommand sweep;
  auto* sweep_app = app.add_subcommand("sweep", "Measured vs predicted front speed over a grid");
  sweep_app->add_option("--sigma-list", sigma_list, "Comma-separated sigma values")->required();
  sweep_app->add_option("--gamma-list", gamma_list, "Comma-separated gamma_t values")->required();
  sweep_app->add_option("--threads", sweep.threads, "Worker threads (0: all cores)");
  sweep_app->add_option("--cells-per-width", sweep.cells_per_width,
                        "Grid sites per moving kink width")
      ->capture_default_str();
  sweep_app->add_option("--out-dir", out_dir, "Output directory");

  std::string liou_config;
  LiouvilleCommand liou;
  auto* liou_app = app.add_subcommand("liouville", "Phase-space density transport");
  liou_app->add_option("--config", liou_config, "Model configuration file")->required();
  liou_app->add_option("--steps", liou.steps, "Number of steps")->capture_default_str();
  liou_app->add_option("--report-every", liou.report_every, "Steps between density dumps");
  liou_app->add_option("--out-dir", out_dir, "Output directory");

  std::string vel_config;
  std::string vel_format = "text";
  auto* vel_app = app.add_subcommand("velocity", "Compare the two kink velocity laws");
  vel_app->add_option("--config", vel_config, "Physical parameter file")->required();
  vel_app->add_option("--format", vel_format, "text or csv")->capture_default_str();

  std::optional<std::string> est_config;
  std::string est_format = "text";
  auto* est_app = app.add_subcommand("estimates", "Order-of-magnitude report");
  est_app->add_option("--config", est_config, "Optional parameter file");
  est_app->add_option("--format", est_format, "text or csv")->capture_default_str();

  reject_unknown_names(app, args);
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested{std::string(kVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  if (*roots_app) {
    config.command = roots;
  } else if (*kink_app) {
    config.command = kink;
  } else if (*tw_app) {
    config.command = tw;
  } else if (*sim_app) {
    config.command = SimulateCommand{sim_config, load_run_spec(sim_config), snapshots_every};
    config.out_dir = out_dir;
  } else if (*sweep_app) {
    sweep.sigmas = parse_list_flag(sigma_list, "--sigma-list");
    sweep.gammas = parse_list_flag(gamma_list, "--gamma-list");
    if (!(sweep.cells_per_width >= 4.0)) throw UsageError("--cells-per-width must be >= 4");
    config.command = sweep;
    config.out_dir = out_dir;
  } else if (*liou_app) {
    liou.config_path = liou_config;
    liou.spec = load_liouville_spec(liou_config);
    if (liou.steps == 0) throw UsageError("--steps must be positive");
    config.command = liou;
    config.out_dir = out_dir;
  } else if (*vel_app) {
    config.command = VelocityCommand{vel_config, load_physical(vel_config),
                                     parse_format_flag(vel_format)};
  } else {
    EstimatesCommand est;
    est.format = parse_format_flag(est_format);
    est.config_path = est_config;
    if (est.config_path) load_estimates(est);
    config.command = est;
  }
  return config;
}

std::vector<std::string> emit_args(const RunConfig& config) {
  std::vector<std::string> out;
  auto emit_out_dir = [&] {
    if (config.out_dir) {
      out.emplace_back("--out-dir");
      out.push_back(*config.out_dir);
    }
  };
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, RootsCommand>) {
          out.emplace_back("roots");
          push(out, "--sigma", c.sigma);
        } else if constexpr (std::is_same_v<T, KinkCommand>) {
          out.emplace_back("kink");
          push(out, "--sigma", c.sigma);
          push(out, "--xi-min", c.xi_min);
          push(out, "--xi-max", c.xi_max);
          push(out, "--step", c.step);
          push(out, "--center", c.center);
        } else if constexpr (std::is_same_v<T, TwOdeCommand>) {
          out.emplace_back("tw-ode");
          push_opt(out, "--rho", c.rho);
          push(out, "--sigma", c.sigma);
          push(out, "--xi0", c.xi0);
          push(out, "--xi1", c.xi1);
          push(out, "--step", c.step);
          push_opt(out, "--psi0", c.psi0);
          push_opt(out, "--dpsi0", c.dpsi0);
        } else if constexpr (std::is_same_v<T, SimulateCommand>) {
          out.insert(out.end(), {"simulate", "--config", c.config_path});
          if (c.snapshots_every > 0) {
            out.insert(out.end(), {"--snapshots-every", std::to_string(c.snapshots_every)});
          }
          emit_out_dir();
        } else if constexpr (std::is_same_v<T, SweepCommand>) {
          out.insert(out.end(), {"sweep", "--sigma-list", format_double_list(c.sigmas),
                                 "--gamma-list", format_double_list(c.gammas)});
          if (c.threads > 0) out.insert(out.end(), {"--threads", std::to_string(c.threads)});
          push(out, "--cells-per-width", c.cells_per_width);
          emit_out_dir();
        } else if constexpr (std::is_same_v<T, LiouvilleCommand>) {
          out.insert(out.end(), {"liouville", "--config", c.config_path, "--steps",
                                 std::to_string(c.steps)});
          if (c.report_every > 0) {
            out.insert(out.end(), {"--report-every", std::to_string(c.report_every)});
          }
          emit_out_dir();
        } else if constexpr (std::is_same_v<T, VelocityCommand>) {
          out.insert(out.end(), {"velocity", "--config", c.config_path, "--format",
                                 std::string(to_string(c.format))});
        } else {
          out.emplace_back("estimates");
          if (c.config_path) out.insert(out.end(), {"--config", *c.config_path});
          out.insert(out.end(), {"--format", std::string(to_string(c.format))});
        }
      },
      config.command);
  return out;
}

std::string invocation_string(const std::vector<std::string>& args) {
  std::string s = "mtlab";
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

std::string resolve_out_dir(const RunConfig& config) {
  if (config.out_dir) return *config.out_dir;
  if (const char* env = std::getenv("MTLAB_OUT_DIR"); env && *env) return env;
  return ".";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 1;
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const DomainError*>(&e)) return 3;
  return 4;
}

namespace {

void report_error(std::ostream& err, const std::exception& e) {
  const auto* mt = dynamic_cast<const Error*>(&e);
  std::string msg = e.what();
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  err << "mtlab: error kind=" << (mt ? mt->kind() : "runtime_failure")
      << " exit=" << exit_code_for(e) << ": " << msg << '\n';
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err, std::string_view invocation) {
  try {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, RootsCommand>) {
            run_roots(c, out, invocation);
          } else if constexpr (std::is_same_v<T, KinkCommand>) {
            run_kink(c, out, invocation);
          } else if constexpr (std::is_same_v<T, TwOdeCommand>) {
            run_tw_ode(c, out, invocation);
          } else if constexpr (std::is_same_v<T, SimulateCommand>) {
            run_simulate(c, prepare_dir(resolve_out_dir(config)), out, invocation);
          } else if constexpr (std::is_same_v<T, SweepCommand>) {
            run_sweep(c, prepare_dir(resolve_out_dir(config)), out, invocation);
          } else if constexpr (std::is_same_v<T, LiouvilleCommand>) {
            run_liouville(c, prepare_dir(resolve_out_dir(config)), out, invocation);
          } else if constexpr (std::is_same_v<T, VelocityCommand>) {
            write_report(out, velocity_report_entries(c.params), c.format, invocation);
          } else {
            write_report(out, estimates_report_entries(c.brain, c.params), c.format, invocation);
          }
        },
        config.command);
  } catch (const std::exception& e) {
    report_error(err, e);
    return exit_code_for(e);
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const std::exception& e) {
    report_error(err, e);
    return exit_code_for(e);
  }
  return run(config, out, err, invocation_string(args));
}

}  // namespace mtlab::cli
