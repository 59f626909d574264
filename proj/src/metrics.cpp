#include "otbary/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "otbary/barycenter.hpp"
#include "otbary/errors.hpp"
#include "otbary/parallel.hpp"
#include "otbary/transport.hpp"

namespace otbary {

namespace {

std::map<int, int> compact_ids(const std::vector<int>& labels) {
  std::map<int, int> ids;
  for (const int label : labels) ids.emplace(label, 0);
  int next = 0;
  for (auto& [label, id] : ids) id = next++;
  return ids;
}

double pairs(double count) { return count * (count - 1.0) / 2.0; }

}  // namespace

ContingencyTable contingency_table(const std::vector<int>& labels_a,
                                   const std::vector<int>& labels_b) {
  if (labels_a.size() != labels_b.size() || labels_a.empty()) {
    throw ValidationError("contingency_table: labelings must be nonempty and equal length");
  }
  const auto ids_a = compact_ids(labels_a);
  const auto ids_b = compact_ids(labels_b);
  ContingencyTable table;
  table.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ids_a.size()),
                                       static_cast<Eigen::Index>(ids_b.size()));
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    table.counts(ids_a.at(labels_a[i]), ids_b.at(labels_b[i])) += 1.0;
  }
  table.total = static_cast<double>(labels_a.size());
  return table;
}

MonteCarloEstimate semidiscrete_w2(const GaussianParams& oracle, const DiscreteMeasure& measure,
                                   int sample_size, int repeats, std::uint64_t seed,
                                   int threads) {
  if (oracle.mean.size() != measure.dim()) {
    throw ValidationError("semidiscrete_w2: dimension mismatch");
  }
  if (sample_size < 1 || repeats < 1) {
    throw ValidationError("semidiscrete_w2: sample_size and repeats must be positive");
  }
  std::vector<double> distances(static_cast<std::size_t>(repeats));
  parallel_for(static_cast<std::size_t>(repeats), threads, [&](std::size_t r) {
    const Eigen::MatrixXd draws = sample(oracle, sample_size, derive_seed(seed, r));
    distances[r] = w2_distance(make_measure(draws), measure);
  });

  MonteCarloEstimate estimate;
  for (const double d : distances) estimate.mean += d;
  estimate.mean /= repeats;
  if (repeats > 1) {
    double ss = 0.0;
    for (const double d : distances) ss += (d - estimate.mean) * (d - estimate.mean);
    estimate.std_error = std::sqrt(ss / (repeats - 1)) / std::sqrt(static_cast<double>(repeats));
  }
  return estimate;
}

double ari(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  const ContingencyTable table = contingency_table(labels_a, labels_b);

  double index = 0.0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      index += pairs(table.counts(i, j));
    }
  }
  double sum_rows = 0.0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    sum_rows += pairs(table.counts.row(i).sum());
  }
  double sum_cols = 0.0;
  for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
    sum_cols += pairs(table.counts.col(j).sum());
  }
  const double expected = sum_rows * sum_cols / pairs(table.total);
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (std::abs(maximum - expected) < 1e-12) return 1.0;  // both labelings trivial
  return (index - expected) / (maximum - expected);
}

double nmi(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
  const ContingencyTable table = contingency_table(labels_a, labels_b);
  const double n = table.total;

  double mutual = 0.0;
  double entropy_a = 0.0;
  double entropy_b = 0.0;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    const double pi = table.counts.row(i).sum() / n;
    if (pi > 0.0) entropy_a -= pi * std::log(pi);
  }
  for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
    const double pj = table.counts.col(j).sum() / n;
    if (pj > 0.0) entropy_b -= pj * std::log(pj);
  }
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      const double pij = table.counts(i, j) / n;
      if (pij <= 0.0) continue;
      const double pi = table.counts.row(i).sum() / n;
      const double pj = table.counts.col(j).sum() / n;
      mutual += pij * std::log(pij / (pi * pj));
    }
  }
  const double denom = 0.5 * (entropy_a + entropy_b);
  if (denom <= 0.0) return 1.0;  // both single-cluster
  return std::clamp(mutual / denom, 0.0, 1.0);
}

double silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || n < 2) {
    throw ValidationError("silhouette: need one label per point, at least two points");
  }
  const auto ids = compact_ids(labels);
  const int k = static_cast<int>(ids.size());
  if (k < 2) throw ValidationError("silhouette: need at least two clusters");

  std::vector<int> compact(labels.size());
  std::vector<double> cluster_size(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    compact[i] = ids.at(labels[i]);
    cluster_size[static_cast<std::size_t>(compact[i])] += 1.0;
  }

  double score = 0.0;
  std::vector<double> mean_dist(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(mean_dist.begin(), mean_dist.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      mean_dist[static_cast<std::size_t>(compact[static_cast<std::size_t>(j)])] +=
          (points.row(i) - points.row(j)).norm();
    }
    const int own = compact[static_cast<std::size_t>(i)];
    const double own_size = cluster_size[static_cast<std::size_t>(own)];
    if (own_size <= 1.0) continue;  // singleton scores 0
    const double a = mean_dist[static_cast<std::size_t>(own)] / (own_size - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, mean_dist[static_cast<std::size_t>(c)] /
                          cluster_size[static_cast<std::size_t>(c)]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) score += (b - a) / denom;
  }
  return score / static_cast<double>(n);
}

double calinski_harabasz(const Eigen::MatrixXd& points, const std::vector<int>& labels) {
  const Eigen::Index n = points.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n || n < 2) {
    throw ValidationError("calinski_harabasz: need one label per point");
  }
  const auto ids = compact_ids(labels);
  const auto k = static_cast<Eigen::Index>(ids.size());
  if (k < 2 || k >= n) {
    throw ValidationError("calinski_harabasz: undefined for k = 1 or k = n");
  }

  const Eigen::RowVectorXd grand_mean = points.colwise().mean();
  Eigen::MatrixXd centroid = Eigen::MatrixXd::Zero(k, points.cols());
  Eigen::VectorXd size = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = ids.at(labels[static_cast<std::size_t>(i)]);
    centroid.row(c) += points.row(i);
    size[c] += 1.0;
  }
  for (Eigen::Index c = 0; c < k; ++c) centroid.row(c) /= size[c];

  double between = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    between += size[c] * (centroid.row(c) - grand_mean).squaredNorm();
  }
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = ids.at(labels[static_cast<std::size_t>(i)]);
    within += (points.row(i) - centroid.row(c)).squaredNorm();
  }
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

std::vector<std::string> classify_nearest_prototype(
    const std::vector<DiscreteMeasure>& test,
    const std::map<std::string, DiscreteMeasure>& prototypes, int threads) {
  if (prototypes.empty()) throw ValidationError("classify: no prototypes");
  std::vector<std::string> labels(test.size());
  parallel_for(test.size(), threads, [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    const std::string* best_label = nullptr;
    for (const auto& [label, prototype] : prototypes) {
      const double distance = w2_distance(test[i], prototype);
      if (distance < best) {  // map order resolves ties toward the smallest label
        best = distance;
        best_label = &label;
      }
    }
    labels[i] = *best_label;
  });
  return labels;
}

ClassificationReport classification_report(const std::vector<std::string>& predicted,
                                           const std::vector<std::string>& truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    throw ValidationError("classification_report: label vectors must be nonempty and equal length");
  }
  std::set<std::string> classes(truth.begin(), truth.end());
  classes.insert(predicted.begin(), predicted.end());

  ClassificationReport report;
  double matches = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) matches += 1.0;
  }
  report.accuracy = matches / static_cast<double>(truth.size());

  for (const auto& cls : classes) {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const bool is_truth = truth[i] == cls;
      const bool is_predicted = predicted[i] == cls;
      if (is_truth && is_predicted) tp += 1.0;
      if (!is_truth && is_predicted) fp += 1.0;
      if (is_truth && !is_predicted) fn += 1.0;
    }
    const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    const double f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    report.precision += precision;
    report.recall += recall;
    report.f1 += f1;
  }
  const auto count = static_cast<double>(classes.size());
  report.precision /= count;
  report.recall /= count;
  report.f1 /= count;
  return report;
}

StabilityGap stability_gap(const WeightedFamily& family_a, const WeightedFamily& family_b,
                           const DiscreteMeasure& candidate) {
  if (family_a.size() != family_b.size()) {
    throw ValidationError("stability_gap: families must have the same number of measures");
  }
  if (family_a.dim() != family_b.dim() || family_a.dim() != candidate.dim()) {
    throw ValidationError("stability_gap: dimension mismatch");
  }
  if ((family_a.family_weights() - family_b.family_weights()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("stability_gap: families must share the same weights pi");
  }

  StabilityGap out;
  out.gap = std::abs(objective(candidate, family_a) - objective(candidate, family_b));

  double radius_sq = candidate.support().rowwise().squaredNorm().maxCoeff();
  for (const auto& family : {std::cref(family_a), std::cref(family_b)}) {
    for (const auto& mu : family.get().measures()) {
      radius_sq = std::max(radius_sq, mu.support().rowwise().squaredNorm().maxCoeff());
    }
  }
  double delta = 0.0;
  for (Eigen::Index n = 0; n < family_a.size(); ++n) {
    delta = std::max(delta, w2_distance(family_a.measures()[static_cast<std::size_t>(n)],
                                        family_b.measures()[static_cast<std::size_t>(n)]));
  }
  out.bound = 4.0 * std::sqrt(radius_sq) * delta;
  return out;
}

}  // namespace otbary
