#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "trajthermo/error.hpp"
#include "trajthermo/model.hpp"
#include "trajthermo/trajectory.hpp"

namespace trajthermo {

/// Counter-based generator: the n-th output is splitmix64(seed + n * gamma),
/// so a stream is fully determined by (seed, position). Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Box-Muller, no cached second value).
  double normal();
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct McmcConfig {
  double beta = 1.0;
  /// Per-node Gaussian step. Unset selects sqrt(dt / (beta m)).
  std::optional<double> proposal_width;
  /// Sweeps; one sweep is (N-1) random-scan single-site updates.
  std::size_t n_steps = 1000;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Default proposal width 1/sqrt(beta m / dt).
double default_proposal_width(double beta, double mass, double dt);

struct SampleRecord {
  std::size_t sweep = 0;
  double action = 0.0;
};

struct ChainStats {
  Trajectory mean_path;
  /// Batch-means standard error, flattened node-major over all N+1 nodes
  /// (zero at the fixed endpoints).
  Vector std_error;
  double acceptance_rate = 0.0;
  double min_action_seen = 0.0;
  Trajectory argmin_path;
  /// Last state of the chain (continuation point for annealing).
  Trajectory final_path;
  /// Retained samples in sweep order.
  std::vector<SampleRecord> samples;
};

/// Change of the discrete action when interior node k moves to `proposal`.
/// Only the two adjacent segments contribute.
double local_action_delta(const DynamicalModel& model, const std::vector<Vector>& nodes,
                          double dt, std::size_t k, ConstSpan proposal);

/// Metropolis rule: accept iff u < exp(-beta * delta).
bool metropolis_accept(double beta, double delta_action, double u);

/// Single-site random-scan Metropolis sampling of exp(-beta I) over the
/// interior nodes of `init` (endpoints fixed). Deterministic for a given seed.
ChainStats metropolis_chain(const DynamicalModel& model, const Trajectory& init,
                            const McmcConfig& cfg);

enum class StepRule { kFixed, kBacktracking };

std::string_view to_string(StepRule rule);
StepRule parse_step_rule(std::string_view name);

struct OptimizerConfig {
  std::size_t max_iters = 1'000'000;
  double grad_tol = 1e-8;
  StepRule step_rule = StepRule::kBacktracking;
  /// Step length for kFixed; 0 selects 0.25 dt / m.
  double step_size = 0.0;

  void validate() const;
};

struct OptimizerResult {
  Trajectory path;
  std::size_t iterations = 0;
  double grad_inf = 0.0;
  double action = 0.0;
};

/// Raised when minimize_action exhausts max_iters; carries the last iterate.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, OptimizerResult last)
      : Error(ErrorCategory::kNumerical, what), last_(std::move(last)) {}

  const OptimizerResult& last() const { return last_; }

 private:
  OptimizerResult last_;
};

/// Gradient descent on the discrete action with fixed endpoints; stops when
/// the infinity norm of the gradient is <= grad_tol.
OptimizerResult minimize_action(const DynamicalModel& model, const Trajectory& init,
                                const OptimizerConfig& cfg);

struct AnnealStage {
  double beta = 1.0;
  std::size_t n_steps = 1000;
};

/// Sequence of Metropolis segments at increasing beta, each continuing from
/// the previous final state, with proposal width sqrt(dt / (beta m)).
/// Returns the final segment's statistics with the argmin over all segments.
ChainStats anneal_to_classical(const DynamicalModel& model, const Trajectory& init,
                               const std::vector<AnnealStage>& schedule, std::uint64_t seed);

}  // namespace trajthermo
