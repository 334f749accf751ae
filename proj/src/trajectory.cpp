#include "trajthermo/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <fmt/core.h>

#include "trajthermo/error.hpp"

namespace trajthermo {

Trajectory::Trajectory(double t0, double dt, std::vector<Vector> nodes,
                       std::optional<std::vector<Vector>> momenta)
    : t0_(t0), dt_(dt), nodes_(std::move(nodes)), momenta_(std::move(momenta)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
    throw ContractViolation("trajectory dt must be positive");
  }
  if (nodes_.size() < 2) {
    throw ContractViolation("trajectory needs at least one segment (two nodes)");
  }
  const std::size_t d = nodes_.front().size();
  if (d == 0) throw ContractViolation("trajectory nodes must be non-empty vectors");
  for (const auto& q : nodes_) {
    if (q.size() != d) throw ContractViolation("trajectory nodes differ in dimension");
  }
  if (momenta_) {
    if (momenta_->size() != nodes_.size()) {
      throw ContractViolation("trajectory momenta count differs from node count");
    }
    for (const auto& p : *momenta_) {
      if (p.size() != d) throw ContractViolation("trajectory momenta differ in dimension");
    }
  }
}

Trajectory Trajectory::straight_line(double t0, double t1, const Vector& q0,
                                     const Vector& q1, std::size_t segments) {
  if (segments == 0) throw ContractViolation("straight_line needs at least one segment");
  if (q0.size() != q1.size()) throw ContractViolation("straight_line endpoints differ in dimension");
  std::vector<Vector> nodes(segments + 1, Vector(q0.size()));
  for (std::size_t k = 0; k <= segments; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(segments);
    for (std::size_t i = 0; i < q0.size(); ++i) nodes[k][i] = q0[i] + s * (q1[i] - q0[i]);
  }
  nodes.back() = q1;
  return Trajectory(t0, (t1 - t0) / static_cast<double>(segments), std::move(nodes));
}

const std::vector<Vector>& Trajectory::momenta() const {
  if (!momenta_) throw ContractViolation("trajectory carries no momenta");
  return *momenta_;
}

Vector Trajectory::interior() const {
  Vector out;
  out.reserve((nodes_.size() - 2) * dim());
  for (std::size_t k = 1; k + 1 < nodes_.size(); ++k) {
    out.insert(out.end(), nodes_[k].begin(), nodes_[k].end());
  }
  return out;
}

Trajectory Trajectory::with_interior(ConstSpan values) const {
  const std::size_t d = dim();
  if (values.size() != (nodes_.size() - 2) * d) {
    throw ContractViolation("interior vector has the wrong length");
  }
  std::vector<Vector> nodes = nodes_;
  for (std::size_t k = 1; k + 1 < nodes.size(); ++k) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>((k - 1) * d), d, nodes[k].begin());
  }
  return Trajectory(t0_, dt_, std::move(nodes));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& path) {
  const std::size_t d = path.dim();
  out << "t";
  for (std::size_t i = 0; i < d; ++i) out << ",q" << i;
  if (path.has_momenta()) {
    for (std::size_t i = 0; i < d; ++i) out << ",p" << i;
  }
  out << '\n';
  for (std::size_t k = 0; k < path.node_count(); ++k) {
    out << fmt::format("{:.17g}", path.time(k));
    for (double q : path.node(k)) out << fmt::format(",{:.17g}", q);
    if (path.has_momenta()) {
      for (double p : path.momenta()[k]) out << fmt::format(",{:.17g}", p);
    }
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ContractViolation("trajectory CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "t") {
    throw ContractViolation("trajectory CSV header must start with 't'");
  }
  std::size_t nq = 0;
  std::size_t np = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] == fmt::format("q{}", nq) && np == 0) {
      ++nq;
    } else if (header[i] == fmt::format("p{}", np)) {
      ++np;
    } else {
      throw ContractViolation(fmt::format("unexpected trajectory CSV column '{}'", header[i]));
    }
  }
  if (nq == 0 || (np != 0 && np != nq)) {
    throw ContractViolation("trajectory CSV must have q columns and matching p columns");
  }

  std::vector<double> times;
  std::vector<Vector> nodes;
  std::vector<Vector> momenta;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Vector row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 1 + nq + np) throw ContractViolation("trajectory CSV row has wrong width");
    times.push_back(row[0]);
    nodes.emplace_back(row.begin() + 1, row.begin() + 1 + static_cast<std::ptrdiff_t>(nq));
    if (np) momenta.emplace_back(row.begin() + 1 + static_cast<std::ptrdiff_t>(nq), row.end());
  }
  if (times.size() < 2) throw ContractViolation("trajectory CSV needs at least two rows");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  std::optional<std::vector<Vector>> moms;
  if (np) moms = std::move(momenta);
  return Trajectory(times.front(), dt, std::move(nodes), std::move(moms));
}

Vector interpolate(const Trajectory& path, double t) {
  const double s = std::clamp((t - path.t0()) / path.dt(), 0.0,
                              static_cast<double>(path.segments()));
  const auto k = std::min(static_cast<std::size_t>(s), path.segments() - 1);
  const double w = s - static_cast<double>(k);
  Vector out(path.dim());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (1.0 - w) * path.node(k)[i] + w * path.node(k + 1)[i];
  }
  return out;
}

}  // namespace trajthermo
