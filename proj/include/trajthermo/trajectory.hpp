#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "trajthermo/numeric.hpp"

namespace trajthermo {

/// Discretised curvilinear path on a uniform grid t_k = t0 + k*dt,
/// k = 0..N. The end nodes are the fixed boundary; only interior nodes are
/// varied by the optimiser, sampler and gradient.
class Trajectory {
 public:
  Trajectory(double t0, double dt, std::vector<Vector> nodes,
             std::optional<std::vector<Vector>> momenta = std::nullopt);

  /// N+1 equally spaced nodes on the segment from (t0, q0) to (t1, q1).
  static Trajectory straight_line(double t0, double t1, const Vector& q0,
                                  const Vector& q1, std::size_t segments);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double t_end() const { return time(segments()); }
  std::size_t segments() const { return nodes_.size() - 1; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t dim() const { return nodes_.front().size(); }

  const std::vector<Vector>& nodes() const { return nodes_; }
  const Vector& node(std::size_t k) const { return nodes_[k]; }
  bool has_momenta() const { return momenta_.has_value(); }
  const std::vector<Vector>& momenta() const;

  /// Interior coordinates flattened node-major: (N-1)*dim values.
  Vector interior() const;
  /// Copy with the interior replaced by a flattened vector (endpoints kept,
  /// momenta dropped).
  Trajectory with_interior(ConstSpan values) const;

 private:
  double t0_;
  double dt_;
  std::vector<Vector> nodes_;
  std::optional<std::vector<Vector>> momenta_;
};

/// CSV with header t,q0..q{n-1}[,p0..p{n-1}], 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& path);
Trajectory read_trajectory_csv(std::istream& in);

/// Linear interpolation of node values at time t (clamped to the span).
Vector interpolate(const Trajectory& path, double t);

}  // namespace trajthermo
