// Independent reference computations the tests check the library
// against. Everything here is deliberately brute force and shares no
// code with the implementation paths it certifies.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "otbary/measure.hpp"

namespace oracles {

// Exhaustive minimum over all permutation couplings; valid reference
// for uniform weights with equal cardinality (an optimal vertex of the
// Birkhoff polytope is a permutation).
inline double permutation_ot_cost(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i) {
      cost += (a.row(i) - b.row(perm[static_cast<std::size_t>(i)])).squaredNorm();
    }
    best = std::min(best, cost / n);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Sorted (quantile) matching cost for 1D uniform measures of equal
// cardinality.
inline double sorted_matching_cost(Eigen::VectorXd a, Eigen::VectorXd b) {
  std::sort(a.data(), a.data() + a.size());
  std::sort(b.data(), b.data() + b.size());
  double cost = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    cost += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return cost / static_cast<double>(a.size());
}

// Frozen-coupling objective sum_n pi_n sum_ij plan_ij ||z_i - x_j||^2;
// the finite-difference target for the gradient check.
inline double frozen_plan_objective(const Eigen::MatrixXd& support,
                                    const std::vector<Eigen::MatrixXd>& plans,
                                    const std::vector<Eigen::MatrixXd>& targets,
                                    const Eigen::VectorXd& pi) {
  double value = 0.0;
  for (std::size_t n = 0; n < plans.size(); ++n) {
    double inner = 0.0;
    for (Eigen::Index i = 0; i < plans[n].rows(); ++i) {
      for (Eigen::Index j = 0; j < plans[n].cols(); ++j) {
        inner += plans[n](i, j) * (support.row(i) - targets[n].row(j)).squaredNorm();
      }
    }
    value += pi[static_cast<Eigen::Index>(n)] * inner;
  }
  return value;
}

// Otsu by direct evaluation of every split: histogram intensities,
// then recompute both class masses and means per candidate threshold.
inline double brute_force_otsu(const Eigen::MatrixXd& pixels, int bins) {
  std::vector<double> histogram(static_cast<std::size_t>(bins), 0.0);
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      const int bin = std::min(static_cast<int>(pixels(r, c) * bins), bins - 1);
      histogram[static_cast<std::size_t>(bin)] += 1.0;
    }
  }
  double best_variance = 0.0;
  int best_split = -1;
  for (int k = 1; k < bins; ++k) {
    double w0 = 0.0, s0 = 0.0, w1 = 0.0, s1 = 0.0;
    for (int b = 0; b < k; ++b) {
      w0 += histogram[static_cast<std::size_t>(b)];
      s0 += b * histogram[static_cast<std::size_t>(b)];
    }
    for (int b = k; b < bins; ++b) {
      w1 += histogram[static_cast<std::size_t>(b)];
      s1 += b * histogram[static_cast<std::size_t>(b)];
    }
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double gap = s0 / w0 - s1 / w1;
    const double variance = w0 * w1 * gap * gap;
    if (variance > best_variance) {
      best_variance = variance;
      best_split = k;
    }
  }
  return best_split < 0 ? -1.0 : static_cast<double>(best_split) / bins;
}

// Best 2-clustering of 1D points by enumerating every bipartition.
inline std::pair<double, double> best_two_partition_centers(const std::vector<double>& xs) {
  const auto n = xs.size();
  double best_inertia = std::numeric_limits<double>::infinity();
  std::pair<double, double> best{0.0, 0.0};
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    double sum0 = 0.0, sum1 = 0.0;
    int count0 = 0, count1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum0 += xs[i];
        ++count0;
      } else {
        sum1 += xs[i];
        ++count1;
      }
    }
    const double c0 = sum0 / count0;
    const double c1 = sum1 / count1;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = (mask & (1u << i)) ? c0 : c1;
      inertia += (xs[i] - c) * (xs[i] - c);
    }
    if (inertia < best_inertia) {
      best_inertia = inertia;
      best = {std::min(c0, c1), std::max(c0, c1)};
    }
  }
  return best;
}

}  // namespace oracles
