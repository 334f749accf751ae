#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "trajthermo/ensemble.hpp"
#include "trajthermo/model.hpp"
#include "trajthermo/trajectory.hpp"

namespace trajthermo {

/// One-dimensional complex amplitude.
using Amplitude = std::complex<double>;

/// How the potential enters the short-time kernel exponent.
enum class PotentialRule {
  kMidpoint,   // V((x + x') / 2) dt, identical to the discrete action
  kTrapezoid,  // (V(x) + V(x')) dt / 2, the symmetric split
};

std::string_view to_string(PotentialRule rule);
PotentialRule parse_potential_rule(std::string_view name);

struct SlicingConfig {
  double hbar = 1.0;
  std::size_t n_slices = 1;
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t n_grid = 2;
  PotentialRule potential_rule = PotentialRule::kTrapezoid;
  /// Restrict the kernel to |x' - x| <= pi hbar dt / (m dx), the largest
  /// displacement whose phase the grid resolves, with a smooth roll-off over
  /// the outer `kernel_taper` fraction of that band.
  bool band_limit = true;
  double kernel_taper = 0.5;
  /// Width of the smooth absorbing layer at each window edge, as a fraction
  /// of the half-window. Applied after every slice except the last.
  double absorb_fraction = 0.1;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_grid - 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  void validate() const;

  /// Plain finite sum: no band limit, no absorbing layer.
  SlicingConfig raw() const;

  /// Window centred on `x_center` with half-width 20 sqrt(hbar T / m).
  static SlicingConfig centered(double x_center, double hbar, double mass, double t_total,
                                std::size_t n_slices, std::size_t n_grid);
};

struct Propagator {
  SlicingConfig config;
  double t_total = 0.0;
  double x_start = 0.0;
  /// K(x_i, T | x_start, 0) on the grid.
  std::vector<Amplitude> values;
  /// Set when dx^2 > hbar dt / m: the kernel phase is under-resolved.
  bool under_resolved = false;

  double dt() const { return t_total / static_cast<double>(config.n_slices); }
};

/// exp(i I(path) / hbar), unit modulus.
Amplitude path_amplitude(const DynamicalModel& model, const Trajectory& path, double hbar);

/// Per-slice normalisation sqrt(m / (2 pi i hbar dt)), principal branch.
Amplitude slice_normalization(double mass, double hbar, double dt);

/// sum over lattice paths of exp(i I / hbar) * (dx A)^(N_t - 1).
Amplitude propagator_lattice_sum(const PathLattice& lattice, const DynamicalModel& model,
                                 double hbar);

/// Raw slicing grid that coincides with the lattice levels and uses the
/// lattice's action rule. On it,
///   propagator_time_sliced(...).values[end] == A * propagator_lattice_sum(...).
SlicingConfig lattice_slicing(const PathLattice& lattice, double hbar);

/// Applies one short-time kernel to psi (no absorbing layer).
std::vector<Amplitude> apply_slice(const DynamicalModel& model, const SlicingConfig& cfg,
                                   double dt, const std::vector<Amplitude>& psi);

/// Iterated kernel application from a discrete delta (1/dx) at x_start.
Propagator propagator_time_sliced(const DynamicalModel& model, const SlicingConfig& cfg,
                                  double x_start, double t_total);

enum class PropagatorKind { kFree, kOscillator };

/// Closed-form free and harmonic-oscillator propagators K(x2, t | x1, 0).
Amplitude analytic_propagator(PropagatorKind kind, double mass, double omega, double hbar,
                              double x1, double x2, double t);

/// |K(x_i)|^2 dx for grid cell i.
double quantum_probability(const Propagator& prop, std::size_t cell_index);
/// Sum of quantum_probability over the grid (not normalised to one).
double total_quantum_probability(const Propagator& prop);

}  // namespace trajthermo
