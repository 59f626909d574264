#include "otbary/barycenter.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otbary/errors.hpp"
#include "otbary/kmeans.hpp"
#include "otbary/parallel.hpp"
#include "otbary/rng.hpp"
#include "otbary/transport.hpp"

namespace otbary {

namespace {

// Terminate outright below this objective; the relative-change rule
// would otherwise divide by ~0.
constexpr double kObjectiveFloor = 1e-14;

void validate_options(const SolverOptions& opts) {
  if (!(opts.step_size > 0.0 && opts.step_size <= 0.5)) {
    throw ValidationError("solver: step size " + std::to_string(opts.step_size) +
                          " outside (0, 0.5]");
  }
  if (!(opts.tolerance > 0.0)) throw ValidationError("solver: tolerance must be positive");
  if (opts.max_iterations < 0) throw ValidationError("solver: negative iteration cap");
}

Eigen::VectorXd state_weights(const SolverOptions& opts, Eigen::Index m) {
  if (opts.barycenter_weights.size() == 0) {
    return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  }
  if (opts.barycenter_weights.size() != m) {
    throw ValidationError("solver: weight vector length " +
                          std::to_string(opts.barycenter_weights.size()) +
                          " does not match support size " + std::to_string(m));
  }
  return opts.barycenter_weights;
}

Eigen::MatrixXd updated_support(const Eigen::MatrixXd& support,
                                const Eigen::MatrixXd& projection_average, double eta) {
  if (eta == 0.5) return projection_average;
  return (1.0 - 2.0 * eta) * support + (2.0 * eta) * projection_average;
}

}  // namespace

double objective(const DiscreteMeasure& candidate, const WeightedFamily& family,
                 int threads) {
  if (candidate.dim() != family.dim()) {
    throw ValidationError("objective: dimension mismatch");
  }
  const auto count = static_cast<std::size_t>(family.size());
  std::vector<double> costs(count);
  parallel_for(count, threads, [&](std::size_t n) {
    costs[n] = solve_ot(candidate, family.measures()[n]).cost;
  });
  double value = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    value += family.family_weights()[static_cast<Eigen::Index>(n)] * costs[n];
  }
  return value;
}

BarycenterState initialize(const WeightedFamily& family, const SolverOptions& opts) {
  validate_options(opts);
  BarycenterState state;

  if (opts.init_mode == InitMode::kUserSupplied) {
    if (opts.initial_support.rows() < 1 || opts.initial_support.cols() != family.dim()) {
      throw ValidationError("initialize: initial support must be m x " +
                            std::to_string(family.dim()) + " with m >= 1");
    }
    state.support = opts.initial_support;
    state.weights = state_weights(opts, state.support.rows());
    return state;
  }

  const Eigen::Index m = opts.support_size;
  if (m < 1) throw ValidationError("initialize: support size must be at least 1");
  const DiscreteMeasure pooled = pool_supports(family);
  if (m > pooled.size()) {
    throw ValidationError("initialize: support size " + std::to_string(m) +
                          " exceeds pooled atom count " + std::to_string(pooled.size()));
  }

  KMeansResult clusters =
      kmeans(pooled.support(), pooled.weights(), static_cast<int>(m), opts.rng_seed);

  // Guard: a center that serves no atoms is re-seeded at a random
  // pooled point so the flow starts with m live particles.
  std::vector<bool> occupied(static_cast<std::size_t>(m), false);
  for (const int a : clusters.assignments) occupied[static_cast<std::size_t>(a)] = true;
  SplitMix64 reseed(derive_seed(opts.rng_seed, 0x5eedu));
  for (Eigen::Index c = 0; c < m; ++c) {
    if (!occupied[static_cast<std::size_t>(c)]) {
      clusters.centers.row(c) =
          pooled.support().row(static_cast<Eigen::Index>(reseed.next_below(pooled.size())));
    }
  }

  state.support = std::move(clusters.centers);
  state.weights = state_weights(opts, m);
  return state;
}

BarycenterState step(const BarycenterState& state, const WeightedFamily& family, double eta,
                     int threads) {
  if (!(eta > 0.0 && eta <= 0.5)) {
    throw ValidationError("step: eta " + std::to_string(eta) + " outside (0, 0.5]");
  }
  const FlowEvaluation flow = evaluate_flow(state.measure(), family, threads);
  BarycenterState next = state;
  next.support = updated_support(state.support, flow.projection_average, eta);
  next.iteration = state.iteration + 1;
  next.objective_trace.push_back(flow.objective);
  return next;
}

BarycenterState solve(const WeightedFamily& family, const SolverOptions& opts) {
  BarycenterState state = initialize(family, opts);

  double previous = std::numeric_limits<double>::infinity();
  for (;;) {
    const FlowEvaluation flow = evaluate_flow(state.measure(), family, opts.threads);
    if (!std::isfinite(flow.objective)) {
      throw NumericalError("solve: non-finite objective at iteration " +
                           std::to_string(state.iteration));
    }
    state.objective_trace.push_back(flow.objective);
    if (flow.objective <= kObjectiveFloor) break;
    if (state.iteration > 0 &&
        std::abs(flow.objective - previous) / previous < opts.tolerance) {
      break;
    }
    if (state.iteration >= opts.max_iterations) break;
    state.support = updated_support(state.support, flow.projection_average, opts.step_size);
    state.iteration += 1;
    previous = flow.objective;
  }
  return state;
}

}  // namespace otbary
