#pragma once

#include <cstddef>
#include <string_view>

#include "trajthermo/model.hpp"
#include "trajthermo/trajectory.hpp"

namespace trajthermo {

enum class Scheme {
  kLeapfrog,  // kick-drift-kick, needs a separable H
  kRk4,
};

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct IntegratorConfig {
  Scheme scheme = Scheme::kLeapfrog;
  double dt = 1e-3;
  std::size_t n_steps = 1;

  /// n_steps = round(span / dt), with dt shrunk so that dt * n_steps == span.
  static IntegratorConfig for_span(Scheme scheme, double span, double dt);

  double span() const { return dt * static_cast<double>(n_steps); }
  void validate() const;
};

/// Realises the flow map of the characteristic equations. Returns
/// n_steps + 1 nodes with momenta; t advances with the order parameter.
Trajectory integrate_characteristic(const DynamicalModel& model, const PhasePoint& x0,
                                    const IntegratorConfig& cfg);

/// Final point of integrate_characteristic without storing the nodes.
PhasePoint flow_map(const DynamicalModel& model, const PhasePoint& x0,
                    const IntegratorConfig& cfg);

/// Single step of the selected scheme, in place.
void integrator_step(const DynamicalModel& model, PhasePoint& x, Scheme scheme, double dt);

}  // namespace trajthermo
