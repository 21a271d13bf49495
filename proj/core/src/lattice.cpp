#include "mtlab/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "mtlab/error.hpp"
#include "mtlab/kink.hpp"

namespace mtlab::lattice {
namespace {

// Relative slack on the dt bound so dt = dx/2 computed in floating point passes.
constexpr double kDtSlack = 1e-12;

inline double force(const double* psi, std::size_t i, double inv_dx2,
                    double sigma) {
  const double p = psi[i];
  return (psi[i + 1] - 2.0 * p + psi[i - 1]) * inv_dx2 + p - p * p * p + sigma;
}

}  // namespace

State init_kink(std::size_t n, double dx, const CubicRoots& roots, double v_init,
                double center, double gamma_t) {
  if (n < kMinSites) {
    throw DomainError(fmt::format("lattice needs at least {} sites, got {}", kMinSites, n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) {
    throw DomainError(fmt::format("dx must be positive, got {}", dx));
  }
  if (!(std::abs(v_init) < 1.0)) {
    throw DomainError(fmt::format("initial speed must satisfy |v| < 1, got {}", v_init));
  }
  if (!(gamma_t >= 0.0) || !std::isfinite(gamma_t)) {
    throw DomainError(fmt::format("gamma_t must be >= 0, got {}", gamma_t));
  }
  const double extent = static_cast<double>(n - 1) * dx;
  if (!(center > 0.0 && center < extent)) {
    throw DomainError(fmt::format("kink center {} outside the domain (0, {})", center, extent));
  }
  const KinkProfile profile{roots, 0.0};
  const double contraction = std::sqrt(1.0 - v_init * v_init);
  const double width = profile.width() * contraction;
  if (width < 4.0 * dx) {
    throw DomainError(fmt::format(
        "kink under-resolved: width {} < 4 dx = {}; refine the grid", width, 4.0 * dx));
  }

  State s;
  s.dx = dx;
  s.gamma_t = gamma_t;
  s.sigma = roots.sigma;
  s.psi.resize(n);
  s.psi_dot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = (static_cast<double>(i) * dx - center) / contraction;
    s.psi[i] = kink_value(profile, xi);
    s.psi_dot[i] = -v_init / contraction * kink_slope(profile, xi);
  }
  s.psi.front() = roots.b;
  s.psi.back() = roots.a;
  s.psi_dot.front() = 0.0;
  s.psi_dot.back() = 0.0;
  return s;
}

double max_stable_dt(double dx) { return 0.5 * dx; }

void step(State& state, double dt) {
  if (!(dt > 0.0) || dt > max_stable_dt(state.dx) * (1.0 + kDtSlack)) {
    throw StabilityViolation(fmt::format(
        "time step {} violates 0 < dt <= dx/2 = {}", dt, max_stable_dt(state.dx)));
  }
  const std::size_t n = state.size();
  double* psi = state.psi.data();
  double* vel = state.psi_dot.data();
  const double inv_dx2 = 1.0 / (state.dx * state.dx);
  const double damp = std::exp(-0.5 * state.gamma_t * dt);
  const double half = 0.5 * dt;
  const double sigma = state.sigma;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    vel[i] = damp * vel[i] + half * force(psi, i, inv_dx2, sigma);
  }
  double peak = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    psi[i] += dt * vel[i];
    peak = std::max(peak, std::abs(psi[i]));
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    vel[i] = damp * (vel[i] + half * force(psi, i, inv_dx2, sigma));
  }
  state.tau += dt;

  if (!(peak <= kBlowupBound)) {
    throw Blowup(fmt::format("lattice field blew up at tau = {} (max |psi| > {})",
                             state.tau, kBlowupBound),
                 state.tau);
  }
}

double energy(const State& state) {
  const auto& psi = state.psi;
  const auto& vel = state.psi_dot;
  const double dx = state.dx;
  double e = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = psi[i] * psi[i] - 1.0;
    e += 0.5 * vel[i] * vel[i] + 0.25 * w * w - state.sigma * psi[i];
    if (i + 1 < psi.size()) {
      const double g = (psi[i + 1] - psi[i]) / dx;
      e += 0.5 * g * g;
    }
  }
  return e * dx;
}

double front_position(const State& state, double level) {
  const auto& psi = state.psi;
  for (std::size_t i = 0; i + 1 < psi.size(); ++i) {
    const double lo = psi[i] - level;
    const double hi = psi[i + 1] - level;
    if (lo == 0.0) return state.position(i);
    if (lo * hi < 0.0) {
      return state.position(i) + lo / (lo - hi) * state.dx;
    }
  }
  if (!psi.empty() && psi.back() == level) return state.position(psi.size() - 1);
  throw NoFront(fmt::format("no crossing of psi = {} at tau = {}", level, state.tau));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("line fit needs two or more paired samples");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

void RunSpec::validate() const {
  if (!(dt > 0.0) || dt > max_stable_dt(dx) * (1.0 + kDtSlack)) {
    throw StabilityViolation(fmt::format(
        "time step {} violates 0 < dt <= dx/2 = {}", dt, max_stable_dt(dx)));
  }
  if (steps == 0) throw DomainError("steps must be positive");
  if (sample_every == 0) throw DomainError("sample_every must be positive");
  if (!(transient >= 0.0)) throw DomainError("transient must be >= 0");
  // Remaining checks (sites, dx, center, resolution) happen in init_kink.
}

RunSpec RunSpec::from_config(const KeyValueFile& file) {
  static constexpr std::string_view kKeys[] = {
      "sigma", "gamma_t", "n", "dx", "dt", "steps",
      "v_init", "center", "transient", "sample_every"};
  file.require_known(kKeys);
  RunSpec s;
  s.sigma = file.get_double("sigma");
  s.gamma_t = file.get_double("gamma_t");
  const auto n = file.get_int("n");
  s.dx = file.get_double("dx");
  s.dt = file.get_double("dt");
  const auto steps = file.get_int("steps");
  s.v_init = file.get_double_or("v_init", 0.0);
  const auto every = file.get_int_or("sample_every", 10);
  if (n <= 0 || steps <= 0 || every <= 0) {
    throw ConfigError(file.source(), 0, "n, steps and sample_every must be positive integers");
  }
  s.n = static_cast<std::size_t>(n);
  s.steps = static_cast<std::size_t>(steps);
  s.sample_every = static_cast<std::size_t>(every);
  s.center = file.get_double_or("center", 0.25 * static_cast<double>(s.n - 1) * s.dx);
  s.transient = file.get_double_or("transient", 0.0);
  return s;
}

std::string RunSpec::to_config_text() const {
  return fmt::format(
      "sigma = {}\ngamma_t = {}\nn = {}\ndx = {}\ndt = {}\nsteps = {}\n"
      "v_init = {}\ncenter = {}\ntransient = {}\nsample_every = {}\n",
      format_double(sigma), format_double(gamma_t), n, format_double(dx),
      format_double(dt), steps, format_double(v_init), format_double(center),
      format_double(transient), sample_every);
}

FrontTrace simulate(const RunSpec& spec, const StepObserver& observer) {
  spec.validate();
  const CubicRoots roots = solve_cubic(spec.sigma);
  State state = init_kink(spec.n, spec.dx, roots, spec.v_init, spec.center, spec.gamma_t);
  const double level = 0.5 * (roots.a + roots.b);

  FrontTrace trace;
  auto sample = [&] {
    trace.times.push_back(state.tau);
    trace.positions.push_back(front_position(state, level));
  };
  if (observer) observer(state, 0);
  sample();
  for (std::size_t k = 1; k <= spec.steps; ++k) {
    step(state, spec.dt);
    if (observer) observer(state, k);
    if (k % spec.sample_every == 0) sample();
  }

  const auto first = std::find_if(trace.times.begin(), trace.times.end(),
                                  [&](double t) { return t >= spec.transient; });
  trace.fit_begin = static_cast<std::size_t>(first - trace.times.begin());
  const std::size_t fitted = trace.times.size() - trace.fit_begin;
  if (fitted < 5) {
    throw DomainError(fmt::format(
        "only {} front samples after the transient; need at least 5", fitted));
  }
  const auto fit = fit_line(std::span(trace.times).subspan(trace.fit_begin),
                            std::span(trace.positions).subspan(trace.fit_begin));
  trace.fitted_speed = fit.slope;
  trace.fit_residual = fit.rms_residual;
  return trace;
}

double predicted_speed(double sigma, double gamma_t) {
  const double rho_star = consistent_rho(solve_cubic(sigma));
  if (rho_star == 0.0) return 0.0;
  if (!(gamma_t > 0.0)) {
    throw NoRoot(fmt::format(
        "no steady kink speed for sigma = {} without damping (gamma_t = {})", sigma, gamma_t));
  }
  const double v = subsonic_speed_for(std::abs(rho_star) / gamma_t);
  return rho_star > 0.0 ? v : -v;
}

RunSpec plan_speed_run(double sigma, double gamma_t, double cells_per_width) {
  if (!(cells_per_width >= 4.0)) {
    throw DomainError("cells_per_width must be >= 4");
  }
  const CubicRoots roots = solve_cubic(sigma);
  const double v = predicted_speed(sigma, gamma_t);
  const double rest_width = KinkProfile{roots, 0.0}.width();
  const double moving_width = rest_width * std::sqrt(1.0 - v * v);

  RunSpec s;
  s.sigma = sigma;
  s.gamma_t = gamma_t;
  s.dx = std::min(0.05, moving_width / cells_per_width);
  s.dt = 0.4 * s.dx;
  // Momentum relaxes like exp(-gamma_t tau); six e-folds settle the speed.
  s.transient = gamma_t > 0.0 ? std::max(20.0, 6.0 / gamma_t) : 20.0;
  double window = 60.0;
  if (v != 0.0) window = std::max(window, 40.0 * s.dx / std::abs(v));
  const double duration = s.transient + window;
  s.steps = static_cast<std::size_t>(std::ceil(duration / s.dt));
  const double margin = 15.0 + 10.0 * rest_width;
  const double length = 2.0 * margin + std::abs(v) * duration;
  s.n = static_cast<std::size_t>(std::ceil(length / s.dx)) + 1;
  s.center = v >= 0.0 ? margin : static_cast<double>(s.n - 1) * s.dx - margin;
  s.v_init = 0.0;
  s.sample_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(0.1 / s.dt)));
  return s;
}

SweepCell run_sweep_cell(double sigma, double gamma_t, double cells_per_width) {
  SweepCell cell;
  cell.sigma = sigma;
  cell.gamma_t = gamma_t;
  cell.predicted_v = predicted_speed(sigma, gamma_t);
  cell.trace = measure_front_speed(plan_speed_run(sigma, gamma_t, cells_per_width));
  cell.measured_v = cell.trace.fitted_speed;
  const double diff = std::abs(cell.measured_v - cell.predicted_v);
  cell.rel_err = cell.predicted_v != 0.0 ? diff / std::abs(cell.predicted_v) : diff;
  return cell;
}

std::vector<SweepCell> run_sweep(std::span<const double> sigmas,
                                 std::span<const double> gammas, unsigned threads,
                                 double cells_per_width, const SweepCellSink& on_cell) {
  struct Task {
    double sigma, gamma_t;
  };
  std::vector<Task> tasks;
  for (double s : sigmas)
    for (double g : gammas) tasks.push_back({s, g});
  std::sort(tasks.begin(), tasks.end(), [](const Task& l, const Task& r) {
    return l.sigma != r.sigma ? l.sigma < r.sigma : l.gamma_t < r.gamma_t;
  });

  std::vector<SweepCell> cells(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        cells[i] = run_sweep_cell(tasks[i].sigma, tasks[i].gamma_t, cells_per_width);
        if (on_cell) on_cell(cells[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    const auto upper = static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1));
    const unsigned count = std::clamp(threads, 1u, upper);
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return cells;
}

}  // namespace mtlab::lattice
