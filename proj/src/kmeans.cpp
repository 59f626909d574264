#include "otbary/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "otbary/errors.hpp"
#include "otbary/rng.hpp"

namespace otbary {

namespace {

// Cumulative-mass inversion; masses need not be normalized. Only
// positive-mass indices are eligible, also when round-off pushes the
// draw past the accumulated total.
Eigen::Index sample_proportional(const Eigen::VectorXd& masses, double total,
                                 SplitMix64& rng) {
  const double r = rng.next_double() * total;
  double acc = 0.0;
  Eigen::Index last_positive = 0;
  for (Eigen::Index i = 0; i < masses.size(); ++i) {
    if (masses[i] <= 0.0) continue;
    last_positive = i;
    acc += masses[i];
    if (r < acc) return i;
  }
  return last_positive;
}

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, const Eigen::VectorXd& w,
                             int k, SplitMix64& rng, bool* duplicates) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(k, points.cols());
  Eigen::VectorXd nearest_sq = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());

  centers.row(0) = points.row(sample_proportional(w, w.sum(), rng));
  for (int t = 1; t < k; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d2 = (points.row(i) - centers.row(t - 1)).squaredNorm();
      nearest_sq[i] = std::min(nearest_sq[i], d2);
    }
    const Eigen::VectorXd mass = w.array() * nearest_sq.array();
    const double total = mass.sum();
    if (total > 0.0) {
      centers.row(t) = points.row(sample_proportional(mass, total, rng));
    } else {
      // Everything coincides with an existing center.
      *duplicates = true;
      centers.row(t) = points.row(sample_proportional(w, w.sum(), rng));
    }
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points,
                    const std::optional<Eigen::VectorXd>& weights, int k,
                    std::uint64_t seed, int max_iter) {
  const Eigen::Index n = points.rows();
  if (n < 1 || points.cols() < 1) throw ValidationError("kmeans: empty input");
  if (!points.allFinite()) throw ValidationError("kmeans: non-finite coordinate");
  if (k < 1 || k > n) {
    throw ValidationError("kmeans: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(n) + "]");
  }
  Eigen::VectorXd w =
      weights ? *weights : Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  if (w.size() != n || (w.array() < 0.0).any() || w.sum() <= 0.0) {
    throw ValidationError("kmeans: bad weight vector");
  }

  SplitMix64 rng(seed);
  KMeansResult result;
  result.duplicate_centers = false;
  result.centers = seed_centers(points, w, k, rng, &result.duplicate_centers);
  result.assignments.assign(n, -1);

  std::vector<int> previous(n, -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = (points.row(i) - result.centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d2 = (points.row(i) - result.centers.row(c)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      result.assignments[i] = best;
      inertia += w[i] * best_d2;
    }
    result.inertia_trace.push_back(inertia);
    result.inertia = inertia;
    if (result.assignments == previous) break;
    previous = result.assignments;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(result.assignments[i]) += w[i] * points.row(i);
      mass[result.assignments[i]] += w[i];
    }
    std::vector<bool> claimed(n, false);
    for (int c = 0; c < k; ++c) {
      if (mass[c] > 0.0) {
        result.centers.row(c) = sums.row(c) / mass[c];
        continue;
      }
      // Re-center the empty cluster on the unclaimed point farthest
      // from its current center.
      Eigen::Index farthest = -1;
      double farthest_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (claimed[i]) continue;
        const double d2 =
            (points.row(i) - result.centers.row(result.assignments[i])).squaredNorm();
        if (d2 > farthest_d2) {
          farthest_d2 = d2;
          farthest = i;
        }
      }
      claimed[farthest] = true;
      result.centers.row(c) = points.row(farthest);
    }
  }
  return result;
}

}  // namespace otbary
