#include "otbary/projection.hpp"

#include <string>
#include <vector>

#include "otbary/errors.hpp"
#include "otbary/parallel.hpp"

namespace otbary {

Eigen::MatrixXd barycentric_projection(const TransportPlan& plan,
                                       const DiscreteMeasure& target) {
  if (plan.plan.cols() != target.size()) {
    throw ValidationError("barycentric_projection: plan has " +
                          std::to_string(plan.plan.cols()) + " columns but target has " +
                          std::to_string(target.size()) + " atoms");
  }
  Eigen::MatrixXd projected = plan.plan * target.support();
  projected.array().colwise() /= plan.source_weights.array();
  return projected;
}

DisplacementField approx_log(const DiscreteMeasure& current, const DiscreteMeasure& target) {
  const TransportPlan plan = solve_ot(current, target);
  return DisplacementField{barycentric_projection(plan, target) - current.support()};
}

DisplacementField approx_gradient(const DiscreteMeasure& current, const WeightedFamily& family,
                                  int threads) {
  if (current.dim() != family.dim()) {
    throw ValidationError("approx_gradient: dimension mismatch");
  }
  const auto count = static_cast<std::size_t>(family.size());
  std::vector<Eigen::MatrixXd> displacements(count);
  parallel_for(count, threads, [&](std::size_t n) {
    displacements[n] = approx_log(current, family.measures()[n]).vectors;
  });

  Eigen::MatrixXd gradient = Eigen::MatrixXd::Zero(current.size(), current.dim());
  for (std::size_t n = 0; n < count; ++n) {
    gradient.noalias() += family.family_weights()[static_cast<Eigen::Index>(n)] *
                          displacements[n];
  }
  gradient *= -2.0;
  return DisplacementField{std::move(gradient)};
}

FlowEvaluation evaluate_flow(const DiscreteMeasure& current, const WeightedFamily& family,
                             int threads) {
  if (current.dim() != family.dim()) {
    throw ValidationError("evaluate_flow: dimension mismatch");
  }
  const auto count = static_cast<std::size_t>(family.size());
  std::vector<Eigen::MatrixXd> projections(count);
  std::vector<double> costs(count);
  parallel_for(count, threads, [&](std::size_t n) {
    const TransportPlan plan = solve_ot(current, family.measures()[n]);
    projections[n] = barycentric_projection(plan, family.measures()[n]);
    costs[n] = plan.cost;
  });

  FlowEvaluation out;
  out.projection_average = Eigen::MatrixXd::Zero(current.size(), current.dim());
  for (std::size_t n = 0; n < count; ++n) {
    const double pi = family.family_weights()[static_cast<Eigen::Index>(n)];
    out.projection_average.noalias() += pi * projections[n];
    out.objective += pi * costs[n];
  }
  return out;
}

}  // namespace otbary
