#include "trajthermo/quantum.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "trajthermo/action.hpp"
#include "trajthermo/error.hpp"

namespace trajthermo {

using namespace std::complex_literals;

std::string_view to_string(PotentialRule rule) {
  return rule == PotentialRule::kMidpoint ? "midpoint" : "trapezoid";
}

PotentialRule parse_potential_rule(std::string_view name) {
  if (name == "midpoint") return PotentialRule::kMidpoint;
  if (name == "trapezoid") return PotentialRule::kTrapezoid;
  throw ContractViolation(
      fmt::format("potential_rule must be 'midpoint' or 'trapezoid', got '{}'", name));
}

void SlicingConfig::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
  if (n_slices < 1) throw DomainError("n_slices must be >= 1");
  if (n_grid < 2) throw DomainError("n_grid must be >= 2");
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw DomainError("x_min must be smaller than x_max");
  }
  if (!(kernel_taper >= 0.0 && kernel_taper <= 1.0)) {
    throw DomainError("kernel_taper must lie in [0, 1]");
  }
  if (!(absorb_fraction >= 0.0 && absorb_fraction < 1.0)) {
    throw DomainError("absorb_fraction must lie in [0, 1)");
  }
}

SlicingConfig SlicingConfig::raw() const {
  SlicingConfig out = *this;
  out.band_limit = false;
  out.absorb_fraction = 0.0;
  return out;
}

SlicingConfig SlicingConfig::centered(double x_center, double hbar, double mass,
                                      double t_total, std::size_t n_slices,
                                      std::size_t n_grid) {
  const double half = 20.0 * std::sqrt(hbar * t_total / mass);
  SlicingConfig cfg;
  cfg.hbar = hbar;
  cfg.n_slices = n_slices;
  cfg.x_min = x_center - half;
  cfg.x_max = x_center + half;
  cfg.n_grid = n_grid;
  return cfg;
}

namespace {

// Smooth (C-infinity) step: 1 for r <= 1 - width, 0 for r >= 1.
double smooth_cutoff(double r, double width) {
  if (r >= 1.0) return 0.0;
  if (width <= 0.0 || r <= 1.0 - width) return 1.0;
  const double s = (r - (1.0 - width)) / width;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return b / (a + b);
}

void check_finite(const std::vector<Amplitude>& psi, std::size_t slice) {
  for (const auto& v : psi) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalError(fmt::format("propagator became non-finite at slice {}", slice));
    }
  }
}

}  // namespace

Amplitude path_amplitude(const DynamicalModel& model, const Trajectory& path, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  model.lagrangian_form();
  const double action = action_of_path(model, path);
  if (!std::isfinite(action)) throw NumericalError("path action is not finite");
  return std::exp(1i * (action / hbar));
}

Amplitude slice_normalization(double mass, double hbar, double dt) {
  return std::sqrt(Amplitude(0.0, -mass / (2.0 * std::numbers::pi * hbar * dt)));
}

Amplitude propagator_lattice_sum(const PathLattice& lattice, const DynamicalModel& model,
                                 double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const Vector actions = lattice_actions(lattice, model);
  Vector re(actions.size());
  Vector im(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const double phase = actions[i] / hbar;
    re[i] = std::cos(phase);
    im[i] = std::sin(phase);
  }
  const Amplitude factor =
      lattice.dx * slice_normalization(model.mass(), hbar, lattice.dt);
  Amplitude norm = 1.0;
  for (std::size_t k = 1; k < lattice.n_slices; ++k) norm *= factor;
  return Amplitude(pairwise_sum(re), pairwise_sum(im)) * norm;
}

SlicingConfig lattice_slicing(const PathLattice& lattice, double hbar) {
  lattice.validate();
  if (lattice.levels < 3) throw ContractViolation("lattice_slicing needs at least 3 levels");
  SlicingConfig cfg;
  cfg.hbar = hbar;
  cfg.n_slices = lattice.n_slices;
  cfg.x_min = lattice.level_value(0);
  cfg.x_max = lattice.level_value(lattice.levels - 1);
  cfg.n_grid = lattice.levels;
  cfg.potential_rule = PotentialRule::kMidpoint;
  return cfg.raw();
}

std::vector<Amplitude> apply_slice(const DynamicalModel& model, const SlicingConfig& cfg,
                                   double dt, const std::vector<Amplitude>& psi) {
  const LagrangianForm& form = model.lagrangian_form();
  if (model.dim() != 1) throw ContractViolation("propagators are one-dimensional");
  if (psi.size() != cfg.n_grid) throw ContractViolation("wavefunction length differs from n_grid");
  const std::size_t n = cfg.n_grid;
  const double dx = cfg.dx();
  const double m = form.mass;
  const double hbar = cfg.hbar;

  std::size_t band = n - 1;
  double reach = 0.0;
  if (cfg.band_limit) {
    reach = std::numbers::pi * hbar * dt / (m * dx);
    band = std::min(band, static_cast<std::size_t>(reach / dx));
  }
  const Amplitude a_dx = dx * slice_normalization(m, hbar, dt);
  std::vector<Amplitude> kinetic(band + 1);
  for (std::size_t d = 0; d <= band; ++d) {
    const double dist = static_cast<double>(d) * dx;
    const double w = cfg.band_limit ? smooth_cutoff(dist / reach, cfg.kernel_taper) : 1.0;
    kinetic[d] = w * a_dx * std::exp(1i * (m * dist * dist / (2.0 * hbar * dt)));
  }

  std::vector<Amplitude> out(n);
  Vector v1(1);
  if (cfg.potential_rule == PotentialRule::kTrapezoid) {
    std::vector<Amplitude> half_kick(n);
    for (std::size_t i = 0; i < n; ++i) {
      v1[0] = cfg.x(i);
      half_kick[i] = std::exp(-1i * (form.potential(v1) * dt / (2.0 * hbar)));
    }
    std::vector<Amplitude> kicked(n);
    for (std::size_t j = 0; j < n; ++j) kicked[j] = half_kick[j] * psi[j];
    parallel_for(n, [&](std::size_t i) {
      const std::size_t lo = i > band ? i - band : 0;
      const std::size_t hi = std::min(n - 1, i + band);
      Amplitude acc = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) acc += kinetic[i > j ? i - j : j - i] * kicked[j];
      out[i] = half_kick[i] * acc;
    });
  } else {
    // Midpoint potential depends on i + j only.
    std::vector<Amplitude> mid_kick(2 * n - 1);
    for (std::size_t s = 0; s < mid_kick.size(); ++s) {
      v1[0] = cfg.x_min + 0.5 * static_cast<double>(s) * dx;
      mid_kick[s] = std::exp(-1i * (form.potential(v1) * dt / hbar));
    }
    parallel_for(n, [&](std::size_t i) {
      const std::size_t lo = i > band ? i - band : 0;
      const std::size_t hi = std::min(n - 1, i + band);
      Amplitude acc = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) {
        acc += kinetic[i > j ? i - j : j - i] * mid_kick[i + j] * psi[j];
      }
      out[i] = acc;
    });
  }
  return out;
}

Propagator propagator_time_sliced(const DynamicalModel& model, const SlicingConfig& cfg,
                                  double x_start, double t_total) {
  cfg.validate();
  if (!(t_total > 0.0) || !std::isfinite(t_total)) throw DomainError("t_total must be positive");
  const double m = model.lagrangian_form().mass;
  const double dx = cfg.dx();
  const double pos = (x_start - cfg.x_min) / dx;
  const double idx = std::round(pos);
  if (idx < 0.0 || idx > static_cast<double>(cfg.n_grid - 1) || std::abs(pos - idx) > 1e-6) {
    throw ContractViolation(fmt::format("x_start {} does not lie on the spatial grid", x_start));
  }

  Propagator prop;
  prop.config = cfg;
  prop.t_total = t_total;
  prop.x_start = x_start;
  const double dt = prop.dt();
  prop.under_resolved = dx * dx > cfg.hbar * dt / m;

  std::vector<Amplitude> absorb(cfg.n_grid, 1.0);
  if (cfg.absorb_fraction > 0.0) {
    const double center = 0.5 * (cfg.x_min + cfg.x_max);
    const double half = 0.5 * (cfg.x_max - cfg.x_min);
    for (std::size_t i = 0; i < cfg.n_grid; ++i) {
      absorb[i] = smooth_cutoff(std::abs(cfg.x(i) - center) / half, cfg.absorb_fraction);
    }
  }

  std::vector<Amplitude> psi(cfg.n_grid, 0.0);
  psi[static_cast<std::size_t>(idx)] = 1.0 / dx;
  for (std::size_t s = 0; s < cfg.n_slices; ++s) {
    psi = apply_slice(model, cfg, dt, psi);
    if (s + 1 < cfg.n_slices && cfg.absorb_fraction > 0.0) {
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= absorb[i];
    }
    check_finite(psi, s + 1);
  }
  prop.values = std::move(psi);
  return prop;
}

Amplitude analytic_propagator(PropagatorKind kind, double mass, double omega, double hbar,
                              double x1, double x2, double t) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  const double two_pi = 2.0 * std::numbers::pi;
  if (kind == PropagatorKind::kFree) {
    const double d = x2 - x1;
    return std::sqrt(Amplitude(0.0, -mass / (two_pi * hbar * t))) *
           std::exp(1i * (mass * d * d / (2.0 * hbar * t)));
  }
  if (!(omega > 0.0)) throw DomainError("omega must be positive");
  const double s = std::sin(omega * t);
  if (std::abs(s) < 1e-12) {
    throw SingularityError(
        fmt::format("oscillator propagator is singular at omega t = {} (caustic)", omega * t));
  }
  const double c = std::cos(omega * t);
  const double phase = mass * omega * ((x1 * x1 + x2 * x2) * c - 2.0 * x1 * x2) / (2.0 * hbar * s);
  return std::sqrt(Amplitude(0.0, -mass * omega / (two_pi * hbar * s))) * std::exp(1i * phase);
}

double quantum_probability(const Propagator& prop, std::size_t cell_index) {
  if (cell_index >= prop.values.size()) {
    throw ContractViolation(fmt::format("cell index {} out of range [0, {})", cell_index,
                                        prop.values.size()));
  }
  return std::norm(prop.values[cell_index]) * prop.config.dx();
}

double total_quantum_probability(const Propagator& prop) {
  Vector cells(prop.values.size());
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = quantum_probability(prop, i);
  return pairwise_sum(cells);
}

}  // namespace trajthermo
