#pragma once

#include <cstddef>
#include <vector>

#include "trajthermo/integrator.hpp"
#include "trajthermo/model.hpp"

namespace trajthermo {

enum class Orientation { kCounterclockwise, kClockwise };

/// Closed loop of phase points at a common order parameter t.
class PhaseLoop {
 public:
  explicit PhaseLoop(std::vector<PhasePoint> points);

  /// One-dimensional circle of the given radius. Counterclockwise is the
  /// orientation with positive loop integral of p dq, i.e. the positive
  /// orientation of the (p, q) plane: q = qc + r sin(theta),
  /// p = pc + r cos(theta).
  static PhaseLoop circle(double q_center, double p_center, double radius,
                          std::size_t n_points, Orientation orientation, double t = 0.0);

  const std::vector<PhasePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double t() const { return points_.front().t; }

 private:
  std::vector<PhasePoint> points_;
};

/// Trapezoidal cyclic sum of p . dq around the loop. The H dt term of the
/// characteristic 1-form vanishes because the loop sits at fixed t.
double loop_1form_integral(const DynamicalModel& model, const PhaseLoop& loop);

/// Evolves every loop point over `span` with the integrator scheme and step
/// of `cfg` (n_steps is re-derived from the span) and returns
/// |loop integral(evolved) - loop integral(initial)|.
double loop_invariance_deviation(const DynamicalModel& model, const PhaseLoop& loop,
                                 double span, const IntegratorConfig& cfg);

/// Flow image of the loop after `span` (points evolved independently).
PhaseLoop evolve_loop(const DynamicalModel& model, const PhaseLoop& loop, double span,
                      const IntegratorConfig& cfg);

}  // namespace trajthermo
