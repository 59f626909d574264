#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace otbary {

// Weighted point cloud sum_j w_j * delta_{x_j} on R^d. Weights live on
// the open simplex: strictly positive, summing to 1. Instances are
// immutable after construction and safe to share across threads.
class DiscreteMeasure {
public:
  // Validates and, when the weight sum is within 1e-9 of 1, silently
  // renormalizes. Larger deviations, nonpositive weights, or non-finite
  // coordinates throw ValidationError.
  DiscreteMeasure(Eigen::MatrixXd support, Eigen::VectorXd weights);

  const Eigen::MatrixXd& support() const { return support_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Index size() const { return support_.rows(); }
  Eigen::Index dim() const { return support_.cols(); }

private:
  Eigen::MatrixXd support_;  // m x d
  Eigen::VectorXd weights_;  // m
};

// Uniform weights when `weights` is omitted. Duplicate support points
// are kept as-is; transport stays well defined either way.
DiscreteMeasure make_measure(Eigen::MatrixXd points,
                             std::optional<Eigen::VectorXd> weights = std::nullopt);

// N measures sharing one ambient dimension plus mixing weights pi on
// the open simplex.
class WeightedFamily {
public:
  WeightedFamily(std::vector<DiscreteMeasure> measures, Eigen::VectorXd family_weights);

  const std::vector<DiscreteMeasure>& measures() const { return measures_; }
  const Eigen::VectorXd& family_weights() const { return family_weights_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(measures_.size()); }
  Eigen::Index dim() const { return measures_.front().dim(); }

private:
  std::vector<DiscreteMeasure> measures_;
  Eigen::VectorXd family_weights_;  // N
};

WeightedFamily make_family(std::vector<DiscreteMeasure> measures,
                           std::optional<Eigen::VectorXd> family_weights = std::nullopt);

// Concatenates all supports; atom (n, j) carries weight pi_n * w_{n,j}.
DiscreteMeasure pool_supports(const WeightedFamily& family);

// Compensated (Kahan) sum; keeps weight-sum checks meaningful at large m.
double stable_sum(const Eigen::VectorXd& values);

}  // namespace otbary
