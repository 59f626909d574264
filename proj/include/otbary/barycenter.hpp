#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "otbary/measure.hpp"
#include "otbary/projection.hpp"

namespace otbary {

enum class InitMode { kKMeansPooled, kUserSupplied };

struct SolverOptions {
  double step_size = 0.5;   // eta in (0, 0.5]
  double tolerance = 1e-6;  // relative objective change
  int max_iterations = 200;
  Eigen::Index support_size = 0;  // m; required for kKMeansPooled
  InitMode init_mode = InitMode::kKMeansPooled;
  std::uint64_t rng_seed = 0;
  Eigen::MatrixXd initial_support;     // used by kUserSupplied
  Eigen::VectorXd barycenter_weights;  // empty -> uniform 1/m
  int threads = 1;
};

// Iterate of the particle flow. Weights are fixed for the whole run;
// only the support moves. The objective trace is non-increasing.
struct BarycenterState {
  Eigen::MatrixXd support;  // m x d
  Eigen::VectorXd weights;  // m
  int iteration = 0;
  std::vector<double> objective_trace;

  DiscreteMeasure measure() const { return DiscreteMeasure(support, weights); }
};

// F(candidate) = sum_n pi_n W2^2(candidate, mu_n), evaluated exactly.
double objective(const DiscreteMeasure& candidate, const WeightedFamily& family,
                 int threads = 1);

// Support from k-means centers of the pooled input atoms (or the
// user-supplied matrix); uniform weights unless overridden.
BarycenterState initialize(const WeightedFamily& family, const SolverOptions& opts);

// One particle-flow update
//   z_i <- (1 - 2 eta) z_i + 2 eta sum_n pi_n T_n(z_i),
// which at eta = 1/2 is exactly the projection average. Appends the
// pre-step objective to the trace.
BarycenterState step(const BarycenterState& state, const WeightedFamily& family, double eta,
                     int threads = 1);

// Runs the flow until the relative objective change drops below
// opts.tolerance, the objective hits ~0, or max_iterations steps.
BarycenterState solve(const WeightedFamily& family, const SolverOptions& opts);

}  // namespace otbary
