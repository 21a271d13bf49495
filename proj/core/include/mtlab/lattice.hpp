#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mtlab/config_file.hpp"
#include "mtlab/cubic.hpp"

/// Space-time simulation of the continuum dimer chain in reduced units
/// (sound speed 1):
///
///   psi_tt = psi_xx - gamma_t psi_t + psi - psi^3 + sigma
///
/// Its traveling waves psi((x - v t)/sqrt(1 - v^2)) obey the kink ODE with
/// rho = gamma_t v / sqrt(1 - v^2). Grid sites sit at x_i = i dx; the end
/// sites are Dirichlet clamps at b (left) and a (right).
namespace mtlab::lattice {

struct State {
  std::vector<double> psi;
  std::vector<double> psi_dot;
  double dx = 0.0;
  double tau = 0.0;
  double gamma_t = 0.0;
  double sigma = 0.0;

  std::size_t size() const noexcept { return psi.size(); }
  double position(std::size_t i) const noexcept { return static_cast<double>(i) * dx; }
};

inline constexpr std::size_t kMinSites = 16;
inline constexpr double kBlowupBound = 1e3;

/// Samples the kink boosted to speed v_init (|v_init| < 1) centred at
/// `center`, with psi_dot from its exact time derivative. Throws
/// DomainError when the contracted kink width is below 4 dx.
State init_kink(std::size_t n, double dx, const CubicRoots& roots, double v_init,
                double center, double gamma_t = 0.0);

/// Largest admissible time step for `dx`.
double max_stable_dt(double dx);

/// One kick-drift-kick leapfrog step with the damping applied as an exact
/// exp(-gamma_t dt / 2) factor on each side. Boundary sites never change.
/// Throws StabilityViolation if dt > dx / 2 and Blowup if max |psi| > 1e3.
void step(State& state, double dt);

/// Discrete sum of [psi_t^2/2 + psi_x^2/2 + (psi^2 - 1)^2/4 - sigma psi] dx.
double energy(const State& state);

/// First crossing of `level` scanning left to right, linearly interpolated.
/// Throws NoFront when psi never crosses `level`.
double front_position(const State& state, double level);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

/// Ordinary least squares. Needs at least two distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// A complete front-tracking run.
struct RunSpec {
  double sigma = 0.0;
  double gamma_t = 0.0;
  std::size_t n = 0;
  double dx = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double v_init = 0.0;
  double center = 0.0;
  double transient = 0.0;       ///< front samples before this time are not fitted
  std::size_t sample_every = 10;  ///< steps between front samples

  bool operator==(const RunSpec&) const = default;

  /// Keys: sigma, gamma_t, n, dx, dt, steps (required); v_init, center,
  /// transient, sample_every (optional). Unknown keys are rejected.
  static RunSpec from_config(const KeyValueFile& file);
  std::string to_config_text() const;
  /// Throws DomainError describing the first inconsistency.
  void validate() const;
};

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> positions;
  double fitted_speed = 0.0;
  double fit_residual = 0.0;
  std::size_t fit_begin = 0;  ///< index of the first fitted sample
};

using StepObserver = std::function<void(const State&, std::size_t step)>;

/// Runs `spec`, sampling the midpoint crossing (a + b)/2 every
/// `sample_every` steps, and fits the post-transient speed. The observer,
/// if set, sees the initial state (step 0) and the state after every step.
FrontTrace simulate(const RunSpec& spec, const StepObserver& observer = {});

inline FrontTrace measure_front_speed(const RunSpec& spec) { return simulate(spec); }

/// Steady speed v with gamma_t v / sqrt(1 - v^2) = rho*(sigma). Zero when
/// sigma == 0; throws NoRoot when gamma_t == 0 and sigma != 0.
double predicted_speed(double sigma, double gamma_t);

/// Picks grid, step and run length so the steady front is resolved by
/// `cells_per_width` sites and travels well past the transient.
RunSpec plan_speed_run(double sigma, double gamma_t, double cells_per_width = 8.0);

struct SweepCell {
  double sigma = 0.0;
  double gamma_t = 0.0;
  double predicted_v = 0.0;
  double measured_v = 0.0;
  double rel_err = 0.0;  ///< |measured - predicted| / |predicted|, or |measured| if predicted == 0
  FrontTrace trace;
};

SweepCell run_sweep_cell(double sigma, double gamma_t, double cells_per_width = 8.0);

using SweepCellSink = std::function<void(const SweepCell&)>;

/// Runs every (sigma, gamma_t) pair on up to `threads` workers. `on_cell`
/// is invoked from worker threads as each cell finishes and must be safe
/// for concurrent calls. The result is sorted by (sigma, gamma_t)
/// regardless of completion order. The first failing cell's error, in
/// that order, is rethrown after all workers join.
std::vector<SweepCell> run_sweep(std::span<const double> sigmas,
                                 std::span<const double> gammas,
                                 unsigned threads, double cells_per_width = 8.0,
                                 const SweepCellSink& on_cell = {});

}  // namespace mtlab::lattice
