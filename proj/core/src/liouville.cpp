#include "mtlab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab::liouville {
namespace {

constexpr double kCfl = 0.8;
constexpr double kNegativeGuard = -1e-12;

void validate_domain(const Domain& d) {
  if (d.n_g < 5 || d.n_p < 5) {
    throw DomainError(fmt::format(
        "phase-space grid needs at least 5 cells per axis, got {} x {}", d.n_g, d.n_p));
  }
  if (!(d.g_max > d.g_min) || !(d.p_max > d.p_min) || !std::isfinite(d.g_min) ||
      !std::isfinite(d.g_max) || !std::isfinite(d.p_min) || !std::isfinite(d.p_max)) {
    throw DomainError("phase-space domain needs finite extents with min < max");
  }
}

double van_leer(double r) { return (r + std::abs(r)) / (1.0 + std::abs(r)); }

/// Flux through a face with velocity u. `up` is the upwind cell, `down`
/// the downwind one and `upup` the cell beyond `up`.
inline double face_flux(Scheme scheme, double u, double c, double upup, double up,
                        double down) {
  if (scheme == Scheme::Upwind) return u * up;
  const double jump = down - up;
  if (jump == 0.0) return u * up;
  const double r = (up - upup) / jump;
  return u * (up + 0.5 * (1.0 - c) * van_leer(r) * jump);
}

Polynomial normalized(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return Polynomial{std::move(c)};
}

}  // namespace

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

CouplingModel CouplingModel::separable(double kinetic, Polynomial potential, Polynomial beta,
                                       Polynomial metric, Domain domain) {
  CouplingModel m;
  m.hamiltonian = [kinetic, potential = std::move(potential)](double g, double p) {
    return 0.5 * kinetic * p * p + potential(g);
  };
  m.beta = [beta = std::move(beta)](double g) { return beta(g); };
  m.metric = [metric = std::move(metric)](double g) { return metric(g); };
  m.domain = domain;
  return m;
}

double DensityGrid::g_center(std::size_t i) const {
  return domain.g_min + (static_cast<double>(i) + 0.5) * dg();
}

double DensityGrid::p_center(std::size_t j) const {
  return domain.p_min + (static_cast<double>(j) + 0.5) * dp();
}

DensityGrid gaussian_blob(const Domain& domain, double g0, double p0, double width) {
  validate_domain(domain);
  if (!(width > 0.0)) throw DomainError("blob width must be positive");
  DensityGrid grid;
  grid.domain = domain;
  grid.values.assign(domain.n_g * domain.n_p, 0.0);
  const double s2 = 2.0 * width * width;
  double mass = 0.0;
  for (std::size_t i = 1; i + 1 < domain.n_g; ++i) {
    for (std::size_t j = 1; j + 1 < domain.n_p; ++j) {
      const double dg = grid.g_center(i) - g0;
      const double dp = grid.p_center(j) - p0;
      const double v = std::exp(-(dg * dg + dp * dp) / s2);
      grid.at(i, j) = v;
      mass += v;
    }
  }
  mass *= grid.dg() * grid.dp();
  if (!(mass > 0.0)) throw DomainError("blob has no mass inside the domain");
  for (double& v : grid.values) v /= mass;
  return grid;
}

Scheme parse_scheme(std::string_view s) {
  if (s == "upwind") return Scheme::Upwind;
  if (s == "limited") return Scheme::Limited;
  throw DomainError(fmt::format("unknown scheme '{}' (expected upwind or limited)", s));
}

std::string_view to_string(Scheme s) {
  return s == Scheme::Upwind ? "upwind" : "limited";
}

Evolver::Evolver(const CouplingModel& model, bool modified, Scheme scheme)
    : domain_(model.domain), scheme_(scheme) {
  validate_domain(domain_);
  const std::size_t ng = domain_.n_g, np = domain_.n_p;
  const double dg = domain_.dg(), dp = domain_.dp();
  auto g_at = [&](std::size_t f) { return domain_.g_min + static_cast<double>(f) * dg; };
  auto p_at = [&](std::size_t f) { return domain_.p_min + static_cast<double>(f) * dp; };

  for (std::size_t i = 0; i < ng; ++i) {
    const double g = domain_.g_min + (static_cast<double>(i) + 0.5) * dg;
    const double G = model.metric(g);
    if (!(G > 0.0) || !std::isfinite(G)) {
      throw InvariantViolation(fmt::format("metric G({}) = {} is not positive", g, G));
    }
  }

  // Faces touching the zero ring are walls; only interior faces carry flux.
  u_g_.assign((ng + 1) * np, 0.0);
  for (std::size_t f = 2; f + 2 <= ng; ++f) {
    for (std::size_t j = 1; j + 1 < np; ++j) {
      const double g = g_at(f);
      u_g_[f * np + j] = (model.hamiltonian(g, p_at(j + 1)) - model.hamiltonian(g, p_at(j))) / dp;
    }
  }
  u_p_.assign(ng * (np + 1), 0.0);
  for (std::size_t i = 1; i + 1 < ng; ++i) {
    const double g = domain_.g_min + (static_cast<double>(i) + 0.5) * dg;
    const double drift = modified ? model.beta(g) * model.metric(g) : 0.0;
    for (std::size_t f = 2; f + 2 <= np; ++f) {
      const double p = p_at(f);
      double u = -(model.hamiltonian(g_at(i + 1), p) - model.hamiltonian(g_at(i), p)) / dg;
      if (modified) u -= drift;
      u_p_[i * (np + 1) + f] = u;
    }
  }

  double max_g = 0.0, max_p = 0.0;
  for (double u : u_g_) max_g = std::max(max_g, std::abs(u));
  for (double u : u_p_) max_p = std::max(max_p, std::abs(u));
  if (!std::isfinite(max_g) || !std::isfinite(max_p)) {
    throw DomainError("non-finite phase-space velocity");
  }
  max_speed_ = max_g + max_p;
  flux_.resize(std::max(ng, np) + 1);
}

double Evolver::max_stable_dt() const noexcept {
  if (max_speed_ == 0.0) return std::numeric_limits<double>::infinity();
  return kCfl * std::min(domain_.dg(), domain_.dp()) / max_speed_;
}

void Evolver::sweep_g(std::vector<double>& rho, double dt) const {
  const std::size_t ng = domain_.n_g, np = domain_.n_p;
  const double k = dt / domain_.dg();
  for (std::size_t j = 1; j + 1 < np; ++j) {
    auto q = [&](std::size_t i) { return rho[i * np + j]; };
    for (std::size_t f = 2; f + 2 <= ng; ++f) {
      const double u = u_g_[f * np + j];
      const double c = std::abs(u) * k;
      flux_[f] = u > 0.0   ? face_flux(scheme_, u, c, q(f - 2), q(f - 1), q(f))
                 : u < 0.0 ? face_flux(scheme_, u, c, q(f + 1), q(f), q(f - 1))
                           : 0.0;
    }
    flux_[1] = 0.0;
    flux_[ng - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < ng; ++i) {
      rho[i * np + j] -= k * (flux_[i + 1] - flux_[i]);
    }
  }
}

void Evolver::sweep_p(std::vector<double>& rho, double dt) const {
  const std::size_t ng = domain_.n_g, np = domain_.n_p;
  const double k = dt / domain_.dp();
  for (std::size_t i = 1; i + 1 < ng; ++i) {
    double* row = rho.data() + i * np;
    const double* u_row = u_p_.data() + i * (np + 1);
    for (std::size_t f = 2; f + 2 <= np; ++f) {
      const double u = u_row[f];
      const double c = std::abs(u) * k;
      flux_[f] = u > 0.0   ? face_flux(scheme_, u, c, row[f - 2], row[f - 1], row[f])
                 : u < 0.0 ? face_flux(scheme_, u, c, row[f + 1], row[f], row[f - 1])
                           : 0.0;
    }
    flux_[1] = 0.0;
    flux_[np - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < np; ++j) row[j] -= k * (flux_[j + 1] - flux_[j]);
  }
}

void Evolver::evolve(DensityGrid& grid, double dt) const {
  if (!(grid.domain == domain_)) throw DomainError("density grid does not match the model domain");
  const double limit = kCfl * std::min(domain_.dg(), domain_.dp());
  if (!(dt > 0.0) || dt * max_speed_ > limit * (1.0 + 1e-12)) {
    throw StabilityViolation(fmt::format(
        "dt = {} violates dt * max speed ({}) <= {} min(dg, dp)", dt, max_speed_, kCfl));
  }
  sweep_g(grid.values, 0.5 * dt);
  sweep_p(grid.values, dt);
  sweep_g(grid.values, 0.5 * dt);
  grid.time += dt;

  for (std::size_t n = 0; n < grid.values.size(); ++n) {
    double& v = grid.values[n];
    if (v < 0.0) {
      if (v < kNegativeGuard) {
        throw NegativeDensity(fmt::format(
            "density {} in cell ({}, {}) at t = {}", v, n / domain_.n_p, n % domain_.n_p, grid.time));
      }
      v = 0.0;
    }
  }
}

DensityGrid evolve(const DensityGrid& grid, const CouplingModel& model, double dt, bool modified,
                   Scheme scheme) {
  DensityGrid out = grid;
  Evolver(model, modified, scheme).evolve(out, dt);
  return out;
}

double total_probability(const DensityGrid& grid) {
  double sum = 0.0;
  for (double v : grid.values) sum += v;
  return sum * grid.dg() * grid.dp();
}

double entropy(const DensityGrid& grid) {
  double sum = 0.0;
  for (double v : grid.values)
    if (v > 0.0) sum -= v * std::log(v);
  return sum * grid.dg() * grid.dp();
}

LiouvilleSpec LiouvilleSpec::from_config(const KeyValueFile& file) {
  static constexpr std::string_view kKeys[] = {
      "g_min", "g_max", "p_min", "p_max", "n_g", "n_p", "kinetic", "potential",
      "beta", "metric", "modified", "scheme", "dt", "blob_g", "blob_p", "blob_width"};
  file.require_known(kKeys);
  LiouvilleSpec s;
  s.domain.g_min = file.get_double("g_min");
  s.domain.g_max = file.get_double("g_max");
  s.domain.p_min = file.get_double("p_min");
  s.domain.p_max = file.get_double("p_max");
  const auto ng = file.get_int("n_g");
  const auto np = file.get_int("n_p");
  if (ng < 5 || np < 5) throw ConfigError(file.source(), 0, "n_g and n_p must be >= 5");
  s.domain.n_g = static_cast<std::size_t>(ng);
  s.domain.n_p = static_cast<std::size_t>(np);
  s.kinetic = file.get_double_or("kinetic", 1.0);
  s.potential = normalized(file.get_list_or("potential", {}));
  s.beta = normalized(file.get_list_or("beta", {}));
  s.metric = normalized(file.get_list_or("metric", {1.0}));
  s.modified = file.get_bool_or("modified", false);
  try {
    s.scheme = parse_scheme(file.get_string_or("scheme", "limited"));
  } catch (const DomainError& e) {
    throw ConfigError(file.source(), 0, e.what());
  }
  if (file.contains("dt")) s.dt = file.get_double("dt");
  s.blob_g = file.get_double_or("blob_g", 0.0);
  s.blob_p = file.get_double_or("blob_p", 0.0);
  s.blob_width = file.get_double_or("blob_width", 0.25);
  return s;
}

std::string LiouvilleSpec::to_config_text() const {
  auto list = [](const Polynomial& p) {
    return p.coeffs.empty() ? std::string("0") : format_double_list(p.coeffs);
  };
  std::string out = fmt::format(
      "g_min = {}\ng_max = {}\np_min = {}\np_max = {}\nn_g = {}\nn_p = {}\n"
      "kinetic = {}\npotential = {}\nbeta = {}\nmetric = {}\nmodified = {}\n"
      "scheme = {}\nblob_g = {}\nblob_p = {}\nblob_width = {}\n",
      format_double(domain.g_min), format_double(domain.g_max), format_double(domain.p_min),
      format_double(domain.p_max), domain.n_g, domain.n_p, format_double(kinetic),
      list(potential), list(beta), list(metric), modified ? "true" : "false",
      to_string(scheme), format_double(blob_g), format_double(blob_p),
      format_double(blob_width));
  if (dt) out += fmt::format("dt = {}\n", format_double(*dt));
  return out;
}

CouplingModel LiouvilleSpec::model() const {
  return CouplingModel::separable(kinetic, potential, beta, metric, domain);
}

DensityGrid LiouvilleSpec::initial_grid() const {
  return gaussian_blob(domain, blob_g, blob_p, blob_width);
}

}  // namespace mtlab::liouville
