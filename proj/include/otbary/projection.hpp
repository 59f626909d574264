#pragma once

#include <Eigen/Core>

#include "otbary/measure.hpp"
#include "otbary/transport.hpp"

namespace otbary {

// One displacement vector per barycenter atom; rows align with the
// support of the measure the field was computed at.
struct DisplacementField {
  Eigen::MatrixXd vectors;  // m x d
};

// Row i is the plan-conditional mean of the target support given mass
// leaving atom i: T(z_i) = (1/v_i) sum_j plan_ij x_j. Every row lies in
// the convex hull of the target support.
Eigen::MatrixXd barycentric_projection(const TransportPlan& plan,
                                       const DiscreteMeasure& target);

// Approximate log map: T(z_i) - z_i under the optimal plan from
// `current` to `target`.
DisplacementField approx_log(const DiscreteMeasure& current, const DiscreteMeasure& target);

// Approximate gradient of the barycenter functional:
// -2 sum_n pi_n (T_n(z_i) - z_i). The per-target transport solves are
// independent; `threads` > 1 runs them concurrently with the reduction
// kept in index order.
DisplacementField approx_gradient(const DiscreteMeasure& current, const WeightedFamily& family,
                                  int threads = 1);

// Projection average sum_n pi_n T_n(z_i) together with the objective
// sum_n pi_n cost_n of the same plans; one transport sweep feeds both
// the particle update and the objective trace.
struct FlowEvaluation {
  Eigen::MatrixXd projection_average;  // m x d
  double objective = 0.0;
};

FlowEvaluation evaluate_flow(const DiscreteMeasure& current, const WeightedFamily& family,
                             int threads = 1);

}  // namespace otbary
