#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "otbary/gaussian.hpp"
#include "otbary/measure.hpp"

namespace otbary {

// Co-occurrence counts between two labelings; backing table for the
// pair-counting and information-theoretic indices.
struct ContingencyTable {
  Eigen::MatrixXd counts;  // r x c
  double total = 0.0;
};

ContingencyTable contingency_table(const std::vector<int>& labels_a,
                                   const std::vector<int>& labels_b);

// Monte-Carlo estimate of W2 between a Gaussian law and a discrete
// measure: repeated size-`sample_size` draws from the Gaussian, exact
// W2 from each empirical to `measure`, mean and standard error over
// repeats. Repeats use derived per-repeat seeds and may run in
// parallel.
struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

MonteCarloEstimate semidiscrete_w2(const GaussianParams& oracle, const DiscreteMeasure& measure,
                                   int sample_size = 100, int repeats = 100,
                                   std::uint64_t seed = 0, int threads = 1);

// Adjusted Rand index under the permutation model.
double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

// Mutual information normalized by the arithmetic mean of entropies
// (natural log); 1 when both labelings are single-cluster.
double nmi(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

// Mean silhouette over all points, exact pairwise Euclidean distances;
// singleton clusters score 0, as do points with a = b = 0.
double silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels);

// (between dispersion / (k-1)) / (within dispersion / (n-k)); requires
// 1 < k < n.
double calinski_harabasz(const Eigen::MatrixXd& points, const std::vector<int>& labels);

// Label of the W2-nearest prototype per test measure; ties go to the
// smallest label in lexicographic order.
std::vector<std::string> classify_nearest_prototype(
    const std::vector<DiscreteMeasure>& test,
    const std::map<std::string, DiscreteMeasure>& prototypes, int threads = 1);

// Accuracy plus macro-averaged precision/recall/F1 over the union of
// label sets; a class never predicted contributes zero precision.
struct ClassificationReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ClassificationReport classification_report(const std::vector<std::string>& predicted,
                                           const std::vector<std::string>& truth);

// Objective gap |F_a(candidate) - F_b(candidate)| next to its bound
// 4 R delta, where R is the radius of the smallest origin-centered
// ball containing every support involved and delta the largest
// pairwise W2 between matched family members.
struct StabilityGap {
  double gap = 0.0;
  double bound = 0.0;
};

StabilityGap stability_gap(const WeightedFamily& family_a, const WeightedFamily& family_b,
                           const DiscreteMeasure& candidate);

}  // namespace otbary
