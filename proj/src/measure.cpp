#include "otbary/measure.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "otbary/errors.hpp"

namespace otbary {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

void validate_simplex(const Eigen::VectorXd& weights, const char* what) {
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] <= 0.0) {
      throw ValidationError(std::string(what) + ": weight " + std::to_string(i) +
                            " = " + std::to_string(weights[i]) +
                            " is not strictly positive");
    }
  }
  const double sum = stable_sum(weights);
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw ValidationError(std::string(what) + ": weights sum to " +
                          std::to_string(sum) + ", outside 1 +/- 1e-9");
  }
}

Eigen::VectorXd normalized(Eigen::VectorXd weights) {
  const double sum = stable_sum(weights);
  if (sum > 0.0 && sum != 1.0) weights /= sum;
  return weights;
}

}  // namespace

double stable_sum(const Eigen::VectorXd& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double y = values[i] - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd support, Eigen::VectorXd weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.rows() < 1 || support_.cols() < 1) {
    throw ValidationError("measure: need at least one atom and one coordinate");
  }
  if (weights_.size() != support_.rows()) {
    throw ValidationError("measure: " + std::to_string(support_.rows()) +
                          " atoms but " + std::to_string(weights_.size()) + " weights");
  }
  if (!support_.allFinite()) {
    throw ValidationError("measure: non-finite coordinate in support");
  }
  validate_simplex(weights_, "measure");
  weights_ = normalized(std::move(weights_));
}

DiscreteMeasure make_measure(Eigen::MatrixXd points,
                             std::optional<Eigen::VectorXd> weights) {
  if (!weights) {
    const Eigen::Index m = points.rows();
    if (m < 1) throw ValidationError("measure: need at least one atom");
    weights = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  }
  return DiscreteMeasure(std::move(points), std::move(*weights));
}

WeightedFamily::WeightedFamily(std::vector<DiscreteMeasure> measures,
                               Eigen::VectorXd family_weights)
    : measures_(std::move(measures)), family_weights_(std::move(family_weights)) {
  if (measures_.empty()) throw ValidationError("family: no measures");
  if (family_weights_.size() != static_cast<Eigen::Index>(measures_.size())) {
    throw ValidationError("family: " + std::to_string(measures_.size()) +
                          " measures but " + std::to_string(family_weights_.size()) +
                          " weights");
  }
  const Eigen::Index d = measures_.front().dim();
  for (std::size_t n = 1; n < measures_.size(); ++n) {
    if (measures_[n].dim() != d) {
      throw ValidationError("family: measure " + std::to_string(n) + " has dimension " +
                            std::to_string(measures_[n].dim()) + ", expected " +
                            std::to_string(d));
    }
  }
  validate_simplex(family_weights_, "family");
  family_weights_ = normalized(std::move(family_weights_));
}

WeightedFamily make_family(std::vector<DiscreteMeasure> measures,
                           std::optional<Eigen::VectorXd> family_weights) {
  if (!family_weights) {
    const auto n = static_cast<Eigen::Index>(measures.size());
    if (n < 1) throw ValidationError("family: no measures");
    family_weights = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  }
  return WeightedFamily(std::move(measures), std::move(*family_weights));
}

DiscreteMeasure pool_supports(const WeightedFamily& family) {
  Eigen::Index total = 0;
  for (const auto& mu : family.measures()) total += mu.size();

  Eigen::MatrixXd support(total, family.dim());
  Eigen::VectorXd weights(total);
  Eigen::Index row = 0;
  for (Eigen::Index n = 0; n < family.size(); ++n) {
    const auto& mu = family.measures()[static_cast<std::size_t>(n)];
    support.middleRows(row, mu.size()) = mu.support();
    weights.segment(row, mu.size()) = family.family_weights()[n] * mu.weights();
    row += mu.size();
  }
  return DiscreteMeasure(std::move(support), std::move(weights));
}

}  // namespace otbary
