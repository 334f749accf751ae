#include "trajthermo/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/core.h>

#include "trajthermo/action.hpp"
#include "trajthermo/error.hpp"

namespace trajthermo {

void PathLattice::validate() const {
  if (n_slices < 1) throw ContractViolation("lattice n_slices must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("lattice dt must be positive");
  if (levels < 1 || levels % 2 == 0) throw ContractViolation("lattice levels must be odd and >= 1");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("lattice dx must be positive");
  if (!std::isfinite(q_start) || !std::isfinite(q_end)) {
    throw ContractViolation("lattice endpoints must be finite");
  }
}

std::uint64_t PathLattice::path_count() const {
  validate();
  std::uint64_t count = 1;
  for (std::size_t k = 1; k < n_slices; ++k) {
    if (count > capacity / levels) {
      throw CapacityError(fmt::format(
          "lattice has {}^{} paths, above the capacity of {}", levels, n_slices - 1, capacity));
    }
    count *= levels;
  }
  if (count > capacity) {
    throw CapacityError(fmt::format(
        "lattice has {}^{} paths, above the capacity of {}", levels, n_slices - 1, capacity));
  }
  return count;
}

double PathLattice::level_value(std::size_t j) const {
  const double offset = static_cast<double>(j) - static_cast<double>(levels - 1) / 2.0;
  return q_mid() + offset * dx;
}

Trajectory PathLattice::path_at(std::uint64_t index) const {
  std::vector<Vector> nodes(n_slices + 1, Vector(1));
  nodes.front()[0] = q_start;
  nodes.back()[0] = q_end;
  for (std::size_t k = n_slices - 1; k >= 1; --k) {
    nodes[k][0] = level_value(static_cast<std::size_t>(index % levels));
    index /= levels;
  }
  return Trajectory(t0, dt, std::move(nodes));
}

std::vector<Trajectory> enumerate_paths(const PathLattice& lattice) {
  const std::uint64_t count = lattice.path_count();
  std::vector<Trajectory> paths;
  paths.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) paths.push_back(lattice.path_at(i));
  return paths;
}

Vector lattice_actions(const PathLattice& lattice, const DynamicalModel& model) {
  const std::uint64_t count = lattice.path_count();
  if (model.dim() != 1) throw ContractViolation("path lattices are one-dimensional");
  model.lagrangian_form();
  Vector actions(count);
  parallel_for(count, [&](std::size_t i) {
    actions[i] = action_of_path(model, lattice.path_at(i));
  });
  return actions;
}

PathDistribution PathDistribution::boltzmann(Vector actions, double beta,
                                             std::optional<PathLattice> lattice) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  if (actions.empty()) throw ContractViolation("distribution needs at least one path");
  for (double a : actions) {
    if (!std::isfinite(a)) throw DomainError("path action is not finite");
  }
  PathDistribution dist;
  dist.beta_ = beta;
  dist.shift_ = *std::min_element(actions.begin(), actions.end());
  dist.weights_.resize(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    dist.weights_[i] = std::exp(-beta * (actions[i] - dist.shift_));
  }
  dist.z_shifted_ = pairwise_sum(dist.weights_);
  for (double& w : dist.weights_) w /= dist.z_shifted_;
  dist.actions_ = std::move(actions);
  dist.lattice_ = std::move(lattice);
  dist.finish();
  return dist;
}

PathDistribution PathDistribution::from_weights(Vector actions, Vector weights, double beta,
                                                std::optional<PathLattice> lattice) {
  if (actions.size() != weights.size() || actions.empty()) {
    throw ContractViolation("actions and weights must be non-empty and of equal length");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be non-negative");
  }
  if (std::abs(pairwise_sum(weights) - 1.0) > 1e-9) {
    throw DomainError("weights must sum to 1");
  }
  PathDistribution dist;
  dist.beta_ = beta;
  dist.actions_ = std::move(actions);
  dist.weights_ = std::move(weights);
  dist.z_shifted_ = std::numeric_limits<double>::quiet_NaN();
  dist.shift_ = 0.0;
  dist.lattice_ = std::move(lattice);
  dist.finish();
  return dist;
}

void PathDistribution::finish() {
  entropy_ = path_entropy(*this);
  Vector terms(weights_.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = weights_[i] * actions_[i];
  mean_action_ = pairwise_sum(terms);
}

double PathDistribution::log_partition() const {
  return std::log(z_shifted_) - beta_ * shift_;
}

PathDistribution boltzmann_distribution(const PathLattice& lattice,
                                        const DynamicalModel& model, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
  return PathDistribution::boltzmann(lattice_actions(lattice, model), beta, lattice);
}

double path_entropy(const PathDistribution& dist) {
  const Vector& p = dist.weights();
  Vector terms(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= 1e-300) terms[i] = -p[i] * std::log(p[i]);
  }
  return pairwise_sum(terms);
}

double mean_action(const PathDistribution& dist) { return dist.mean_action(); }

double boltzmann_mean_action(ConstSpan actions, double beta) {
  const double shift = *std::min_element(actions.begin(), actions.end());
  Vector w(actions.size());
  Vector wa(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i) {
    w[i] = std::exp(-beta * (actions[i] - shift));
    wa[i] = w[i] * actions[i];
  }
  return pairwise_sum(wa) / pairwise_sum(w);
}

double solve_beta_for_actions(ConstSpan actions, double target, double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (actions.empty()) throw ContractViolation("solve_beta needs at least one path");
  const double min_action = *std::min_element(actions.begin(), actions.end());
  const double uniform_mean = pairwise_sum(actions) / static_cast<double>(actions.size());
  if (!(target > min_action && target < uniform_mean)) {
    throw InfeasibleError(fmt::format(
        "target mean action {} must lie strictly between the minimum action {} "
        "and the beta->0 mean {} (beta would be infinite, zero or negative)",
        target, min_action, uniform_mean));
  }

  double lo = 1e-6;
  double hi = 1e6;
  while (boltzmann_mean_action(actions, lo) < target) {
    lo /= 10.0;
    if (lo < 1e-300) throw InfeasibleError("no beta > 0 reaches the target mean action");
  }
  while (boltzmann_mean_action(actions, hi) > target) {
    hi *= 10.0;
    if (hi > 1e300) throw InfeasibleError("no finite beta reaches the target mean action");
  }

  double mid = lo;
  for (int iter = 0; iter < 10000; ++iter) {
    mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double value = boltzmann_mean_action(actions, mid);
    if (std::abs(value - target) <= tol) return mid;
    if (value > target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return mid;
}

double solve_beta(const PathLattice& lattice, const DynamicalModel& model, double target,
                  double tol) {
  const Vector actions = lattice_actions(lattice, model);
  return solve_beta_for_actions(actions, target, tol);
}

double maxent_stationarity(const PathDistribution& dist, const MultiplierState& mult) {
  double worst = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double p = dist.weights()[i];
    if (!(p > 0.0)) {
      throw DomainError(fmt::format("maxent_stationarity: weight of path {} is zero", i));
    }
    const double r = std::log(p) + 1.0 + mult.alpha + mult.beta * dist.actions()[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::size_t most_probable_index(const PathDistribution& dist) {
  const Vector& w = dist.weights();
  const Vector& a = dist.actions();
  std::size_t best = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] > w[best] || (w[i] == w[best] && a[i] < a[best])) best = i;
  }
  return best;
}

MostProbablePath most_probable_path(const PathDistribution& dist) {
  if (!dist.lattice()) {
    throw ContractViolation("most_probable_path needs a distribution built from a lattice");
  }
  const std::size_t index = most_probable_index(dist);
  return MostProbablePath{index, dist.lattice()->path_at(index)};
}

}  // namespace trajthermo
