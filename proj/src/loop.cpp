#include "trajthermo/loop.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "trajthermo/error.hpp"

namespace trajthermo {

PhaseLoop::PhaseLoop(std::vector<PhasePoint> points) : points_(std::move(points)) {
  if (points_.size() < 3) throw ContractViolation("phase loop needs at least 3 points");
  const double t = points_.front().t;
  const std::size_t d = points_.front().q.size();
  for (const auto& x : points_) {
    if (x.t != t) throw ContractViolation("phase loop points must share the order parameter");
    if (x.q.size() != d || x.p.size() != d) {
      throw ContractViolation("phase loop points differ in dimension");
    }
  }
}

PhaseLoop PhaseLoop::circle(double q_center, double p_center, double radius,
                            std::size_t n_points, Orientation orientation, double t) {
  std::vector<PhasePoint> pts;
  pts.reserve(n_points);
  const double sign = orientation == Orientation::kCounterclockwise ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double theta =
        sign * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_points);
    pts.push_back(PhasePoint{t, {q_center + radius * std::sin(theta)},
                             {p_center + radius * std::cos(theta)}});
  }
  return PhaseLoop(std::move(pts));
}

double loop_1form_integral(const DynamicalModel& model, const PhaseLoop& loop) {
  const auto& pts = loop.points();
  model.check_point(pts.front());
  const std::size_t n = pts.size();
  Vector terms(n);
  for (std::size_t j = 0; j < n; ++j) {
    const PhasePoint& a = pts[j];
    const PhasePoint& b = pts[(j + 1) % n];
    double s = 0.0;
    for (std::size_t i = 0; i < a.q.size(); ++i) {
      s += 0.5 * (a.p[i] + b.p[i]) * (b.q[i] - a.q[i]);
    }
    terms[j] = s;
  }
  return pairwise_sum(terms);
}

PhaseLoop evolve_loop(const DynamicalModel& model, const PhaseLoop& loop, double span,
                      const IntegratorConfig& cfg) {
  if (span == 0.0) return loop;
  const IntegratorConfig step = IntegratorConfig::for_span(cfg.scheme, span, cfg.dt);
  const auto& pts = loop.points();
  std::vector<PhasePoint> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t j) {
    out[j] = flow_map(model, pts[j], step);
    out[j].t = loop.t() + span;
  });
  return PhaseLoop(std::move(out));
}

double loop_invariance_deviation(const DynamicalModel& model, const PhaseLoop& loop,
                                 double span, const IntegratorConfig& cfg) {
  if (span == 0.0) return 0.0;
  const double before = loop_1form_integral(model, loop);
  const double after = loop_1form_integral(model, evolve_loop(model, loop, span, cfg));
  return std::abs(after - before);
}

}  // namespace trajthermo
