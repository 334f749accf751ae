#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "trajthermo/model.hpp"
#include "trajthermo/trajectory.hpp"

namespace trajthermo {

/// Finite, enumerable surrogate of the fixed-endpoint path space: n_slices
/// time steps, each interior node on one of `levels` equally spaced values
/// centred on the midpoint of the endpoints. One spatial dimension.
struct PathLattice {
  std::size_t n_slices = 1;
  double dt = 1.0;
  std::size_t levels = 1;
  double dx = 1.0;
  double q_start = 0.0;
  double q_end = 0.0;
  double t0 = 0.0;
  std::uint64_t capacity = 10'000'000;

  void validate() const;
  /// levels^(n_slices - 1); throws CapacityError above `capacity`.
  std::uint64_t path_count() const;
  double q_mid() const { return 0.5 * (q_start + q_end); }
  /// Coordinate of level index j in [0, levels).
  double level_value(std::size_t j) const;
  /// Path at lexicographic enumeration index (first interior node is the
  /// most significant digit).
  Trajectory path_at(std::uint64_t index) const;
};

std::vector<Trajectory> enumerate_paths(const PathLattice& lattice);

/// Action of every enumerated path, in enumeration order.
Vector lattice_actions(const PathLattice& lattice, const DynamicalModel& model);

/// Probability weights over an enumerated path set together with the
/// canonical-ensemble summary quantities. Immutable snapshot.
class PathDistribution {
 public:
  /// Boltzmann weights exp(-beta (I - I_min)) / Z_shifted.
  static PathDistribution boltzmann(Vector actions, double beta,
                                    std::optional<PathLattice> lattice = std::nullopt);
  /// Arbitrary normalised weights (used to probe non-equilibrium states).
  static PathDistribution from_weights(Vector actions, Vector weights, double beta,
                                       std::optional<PathLattice> lattice = std::nullopt);

  double beta() const { return beta_; }
  const Vector& actions() const { return actions_; }
  const Vector& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  /// Sum of exp(-beta (I - shift)); shift is the minimum action.
  double z_shifted() const { return z_shifted_; }
  double shift() const { return shift_; }
  /// log Z with the unshifted convention Z = sum exp(-beta I).
  double log_partition() const;
  double entropy() const { return entropy_; }
  double mean_action() const { return mean_action_; }
  const std::optional<PathLattice>& lattice() const { return lattice_; }

 private:
  PathDistribution() = default;
  void finish();

  double beta_ = 1.0;
  Vector actions_;
  Vector weights_;
  double z_shifted_ = 1.0;
  double shift_ = 0.0;
  double entropy_ = 0.0;
  double mean_action_ = 0.0;
  std::optional<PathLattice> lattice_;
};

PathDistribution boltzmann_distribution(const PathLattice& lattice,
                                        const DynamicalModel& model, double beta);

/// S = -sum p log p (natural log; p < 1e-300 contributes 0).
double path_entropy(const PathDistribution& dist);
double mean_action(const PathDistribution& dist);

/// Mean action of the Boltzmann distribution at beta, from raw actions.
double boltzmann_mean_action(ConstSpan actions, double beta);

/// beta > 0 with |<I>(beta) - target| <= tol, by bisection of the strictly
/// decreasing map beta -> <I>(beta). The target must lie strictly between
/// the minimum action and the uniform (beta -> 0) mean.
double solve_beta(const PathLattice& lattice, const DynamicalModel& model,
                  double target_mean_action, double tol);
double solve_beta_for_actions(ConstSpan actions, double target_mean_action, double tol);

struct MultiplierState {
  double alpha = 0.0;
  double beta = 0.0;
};

/// max over paths of |log p + 1 + alpha + beta I|: the residual of the
/// stationarity condition of the constrained entropy functional.
double maxent_stationarity(const PathDistribution& dist, const MultiplierState& mult);

/// Index of the maximal weight (ties: lower action, then lower index).
std::size_t most_probable_index(const PathDistribution& dist);

struct MostProbablePath {
  std::size_t index = 0;
  Trajectory path;
};
/// Requires the distribution to carry its lattice.
MostProbablePath most_probable_path(const PathDistribution& dist);

}  // namespace trajthermo
