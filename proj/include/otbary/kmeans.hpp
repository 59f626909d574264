#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace otbary {

struct KMeansResult {
  Eigen::MatrixXd centers;  // k x d
  std::vector<int> assignments;
  double inertia = 0.0;
  // Inertia recorded at each assignment pass; non-increasing.
  std::vector<double> inertia_trace;
  // Set when the input collapses onto fewer than k distinct locations
  // and centers had to be duplicated.
  bool duplicate_centers = false;
};

// Weighted Lloyd iterations from k-means++ seeding (sampling mass
// proportional to weight * squared distance to the nearest chosen
// center). Deterministic given `seed`; stops when assignments repeat
// exactly or after max_iter passes. Empty clusters are re-centered on
// the point currently farthest from its own center.
KMeansResult kmeans(const Eigen::MatrixXd& points,
                    const std::optional<Eigen::VectorXd>& weights, int k,
                    std::uint64_t seed, int max_iter = 100);

}  // namespace otbary
