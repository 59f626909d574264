#pragma once

#include <Eigen/Core>

#include "otbary/measure.hpp"

namespace otbary {

// Optimal coupling between two discrete measures under squared
// Euclidean cost. Row sums equal source weights, column sums equal
// target weights, and the dual potentials certify optimality
// (f_i + g_j <= c_ij everywhere, equality wherever plan_ij > 0).
struct TransportPlan {
  Eigen::MatrixXd plan;               // m x m'
  Eigen::VectorXd source_weights;     // m
  Eigen::VectorXd target_weights;     // m'
  double cost = 0.0;                  // sum_ij plan_ij * ||z_i - x_j||^2
  Eigen::VectorXd source_potentials;  // f, normalized so f[0] == 0
  Eigen::VectorXd target_potentials;  // g
};

// Exact transportation LP via network simplex on the bipartite graph:
// north-west-corner starting basis, Bland's anti-cycling pivot rule,
// degenerate zero-flow arcs kept in the basis. Deterministic given the
// inputs. Throws NumericalError if the pivot cap 50*(m+m')*max(m,m')
// is exceeded (which would signal a degeneracy bug, not bad data).
TransportPlan solve_ot(const DiscreteMeasure& source, const DiscreteMeasure& target);

// sqrt of the optimal coupling cost.
double w2_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Worst violation of dual feasibility and of complementary slackness on
// the plan's support; ~0 certifies optimality independently of how the
// plan was produced.
double certificate_violation(const TransportPlan& plan, const DiscreteMeasure& source,
                             const DiscreteMeasure& target);

// ||p - q||^2 accumulated coordinate-wise; kept out of line so every
// cost evaluation shares the cancellation-free form.
double squared_distance(const Eigen::MatrixXd& rows_a, Eigen::Index a,
                        const Eigen::MatrixXd& rows_b, Eigen::Index b);

}  // namespace otbary
