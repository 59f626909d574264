#include "otbary/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "otbary/barycenter.hpp"
#include "otbary/bayes.hpp"
#include "otbary/errors.hpp"
#include "otbary/gaussian.hpp"
#include "otbary/kmeans.hpp"
#include "otbary/parallel.hpp"
#include "otbary/rng.hpp"
#include "otbary/transport.hpp"

namespace otbary {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

GaussianParams covariance_only(const Eigen::MatrixXd& covariance) {
  return make_gaussian(Eigen::VectorXd::Zero(covariance.rows()), covariance);
}

// Fisher-Yates with the counter-based stream.
std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, std::uint64_t seed) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  SplitMix64 rng(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  return order;
}

}  // namespace

std::vector<GaussBenchRow> run_gauss_bench(const GaussBenchConfig& config) {
  if (config.repeats < 1 || config.atom_grid.empty()) {
    throw ValidationError("gauss-bench: need at least one repetition and one grid entry");
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(2, 2);

  std::vector<std::vector<GaussBenchRow>> per_rep(static_cast<std::size_t>(config.repeats));
  parallel_for(static_cast<std::size_t>(config.repeats), config.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = derive_seed(config.seed, rep);
    SplitMix64 rng(rep_seed);

    // Four components: means around the quadrant centers
    // 10 * ((-1)^floor(i/2), (-1)^i), covariances Wishart(df=4, I).
    std::vector<GaussianParams> components;
    std::vector<DiscreteMeasure> empiricals;
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd center(2);
      center << 10.0 * (i / 2 == 0 ? 1.0 : -1.0), 10.0 * (i % 2 == 0 ? 1.0 : -1.0);
      Eigen::VectorXd mean = center;
      mean[0] += rng.next_normal();
      mean[1] += rng.next_normal();
      components.push_back(make_gaussian(mean, sample_wishart(4, identity, rng)));
      empiricals.push_back(make_measure(
          sample(components.back(), config.samples_per_component, rng.next_u64())));
    }
    const GaussianParams oracle =
        gaussian_barycenter(components, Eigen::VectorXd::Constant(4, 0.25));
    const WeightedFamily family = make_family(std::move(empiricals));

    for (const int n_atoms : config.atom_grid) {
      SolverOptions opts;
      opts.support_size = n_atoms;
      opts.tolerance = config.tolerance;
      opts.max_iterations = config.max_iterations;
      opts.rng_seed = derive_seed(rep_seed, 0xA0000u + static_cast<std::uint64_t>(n_atoms));
      const BarycenterState state = solve(family, opts);
      const DiscreteMeasure barycenter = state.measure();

      const MonteCarloEstimate w2 = semidiscrete_w2(
          oracle, barycenter, config.mc_sample_size, config.mc_repeats,
          derive_seed(rep_seed, 0xB0000u + static_cast<std::uint64_t>(n_atoms)));
      const GaussianParams fit = mle(barycenter.support(), barycenter.weights());

      GaussBenchRow row;
      row.rep = static_cast<int>(rep);
      row.n_atoms = n_atoms;
      row.w2_mc = w2.mean;
      row.w2_std_error = w2.std_error;
      row.mean_err = (fit.mean - oracle.mean).norm();
      row.cov_err = bures_distance(covariance_only(fit.covariance),
                                   covariance_only(oracle.covariance));
      per_rep[rep].push_back(row);
    }
  });

  std::vector<GaussBenchRow> rows;
  for (const auto& chunk : per_rep) rows.insert(rows.end(), chunk.begin(), chunk.end());
  return rows;
}

std::vector<WaspRecord> run_wasp(const WaspConfig& config) {
  if (config.repeats < 1 || config.subset_counts.empty() || config.support_sizes.empty()) {
    throw ValidationError("wasp: need repetitions, subset counts, and support sizes");
  }

  std::vector<std::vector<WaspRecord>> per_rep(static_cast<std::size_t>(config.repeats));
  parallel_for(static_cast<std::size_t>(config.repeats), config.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = derive_seed(config.seed, rep);
    const RegressionData data = generate_data(config.n, config.p, Eigen::VectorXd(), 1.0,
                                              derive_seed(rep_seed, 1));
    const GaussianParams oracle = oracle_posterior(data);
    const auto order = shuffled_indices(config.n, derive_seed(rep_seed, 2));

    auto evaluate = [&](const DiscreteMeasure& measure, int K, int m,
                        std::uint64_t mc_seed) {
      WaspRecord record;
      record.K = K;
      record.m = m;
      record.rep = static_cast<int>(rep);
      record.seed = rep_seed;
      record.w2_to_oracle = semidiscrete_w2(oracle, measure, config.mc_sample_size,
                                            config.mc_repeats, mc_seed)
                                .mean;
      const GaussianParams fit = mle(measure.support(), measure.weights());
      record.mean_err = (fit.mean - oracle.mean).norm();
      record.cov_err = bures_distance(covariance_only(fit.covariance),
                                      covariance_only(oracle.covariance));
      return record;
    };

    for (const int K : config.subset_counts) {
      if (K < 1 || K > config.n) throw ValidationError("wasp: invalid subset count");
      std::vector<GaussianParams> posteriors;
      for (int k = 0; k < K; ++k) {
        const auto begin = static_cast<Eigen::Index>(
            static_cast<std::int64_t>(k) * config.n / K);
        const auto end = static_cast<Eigen::Index>(
            static_cast<std::int64_t>(k + 1) * config.n / K);
        RegressionData subset;
        subset.X.resize(end - begin, config.p);
        subset.y.resize(end - begin);
        for (Eigen::Index t = begin; t < end; ++t) {
          subset.X.row(t - begin) = data.X.row(order[static_cast<std::size_t>(t)]);
          subset.y[t - begin] = data.y[order[static_cast<std::size_t>(t)]];
        }
        subset.true_beta = data.true_beta;
        subset.sigma2 = data.sigma2;
        const double alpha =
            static_cast<double>(config.n) / static_cast<double>(end - begin);
        posteriors.push_back(subset_power_posterior(subset, alpha));
      }

      // Baseline: raw draws from a single subset posterior, no mixing.
      const Eigen::MatrixXd raw =
          sample(posteriors.front(), config.draws_per_subset,
                 derive_seed(rep_seed, 0xC00u + static_cast<std::uint64_t>(K)));
      per_rep[rep].push_back(evaluate(make_measure(raw), K, 0,
                                      derive_seed(rep_seed, 0xE00u + static_cast<std::uint64_t>(K))));

      for (const int m : config.support_sizes) {
        const DiscreteMeasure aggregated =
            wasp(posteriors, config.draws_per_subset, m,
                 derive_seed(rep_seed, 0xD000u + static_cast<std::uint64_t>(K) * 1000u +
                                           static_cast<std::uint64_t>(m)));
        per_rep[rep].push_back(
            evaluate(aggregated, K, m,
                     derive_seed(rep_seed, 0xF000u + static_cast<std::uint64_t>(K) * 1000u +
                                               static_cast<std::uint64_t>(m))));
      }
    }
  });

  std::vector<WaspRecord> records;
  for (const auto& chunk : per_rep) records.insert(records.end(), chunk.begin(), chunk.end());
  return records;
}

std::vector<ClassifyRow> run_classify(const std::vector<LabeledMeasure>& train,
                                      const std::vector<LabeledMeasure>& test,
                                      const ClassifyConfig& config) {
  if (train.empty() || test.empty()) {
    throw ValidationError("classify: empty training or test set");
  }
  std::map<std::string, std::vector<DiscreteMeasure>> by_class;
  for (const auto& item : train) by_class[item.label].push_back(item.measure);

  std::vector<DiscreteMeasure> test_measures;
  std::vector<std::string> truth;
  for (const auto& item : test) {
    test_measures.push_back(item.measure);
    truth.push_back(item.label);
  }

  std::vector<ClassifyRow> rows(config.support_sizes.size());
  for (std::size_t mi = 0; mi < config.support_sizes.size(); ++mi) {
    const int m = config.support_sizes[mi];

    // Class prototypes are independent solves; run them as one batch.
    std::vector<std::string> class_names;
    for (const auto& [label, measures] : by_class) class_names.push_back(label);
    std::vector<std::optional<DiscreteMeasure>> slots(class_names.size());
    parallel_for(class_names.size(), config.threads, [&](std::size_t c) {
      SolverOptions opts;
      opts.support_size = m;
      opts.tolerance = config.tolerance;
      opts.max_iterations = config.max_iterations;
      opts.rng_seed =
          derive_seed(config.seed, 0xCAFEu + c * 100003u + static_cast<std::uint64_t>(m));
      slots[c] = solve(make_family(by_class.at(class_names[c])), opts).measure();
    });

    std::map<std::string, DiscreteMeasure> prototypes;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      prototypes.emplace(class_names[c], std::move(*slots[c]));
    }
    const auto predicted =
        classify_nearest_prototype(test_measures, prototypes, config.threads);
    rows[mi] = ClassifyRow{m, classification_report(predicted, truth)};
  }
  return rows;
}

namespace {

std::vector<int> nearest_centroid_assignment(const Eigen::MatrixXd& points,
                                             const Eigen::MatrixXd& centroids) {
  std::vector<int> assignment(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_d2 = (points.row(i) - centroids.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = static_cast<int>(c);
      }
    }
    assignment[static_cast<std::size_t>(i)] = best;
  }
  return assignment;
}

DvqRow score_partition(const Eigen::MatrixXd& data,
                       const std::optional<std::vector<int>>& labels,
                       const std::vector<int>& assignment, int k, int S,
                       std::string method) {
  DvqRow row;
  row.k = k;
  row.S = S;
  row.method = std::move(method);
  row.ari = labels ? ari(*labels, assignment) : kNaN;
  row.nmi = labels ? nmi(*labels, assignment) : kNaN;
  try {
    row.silhouette = silhouette(data, assignment);
  } catch (const ValidationError&) {
    row.silhouette = kNaN;  // k = 1 or collapsed partition
  }
  try {
    row.calinski_harabasz = calinski_harabasz(data, assignment);
  } catch (const ValidationError&) {
    row.calinski_harabasz = kNaN;
  }
  return row;
}

}  // namespace

std::vector<DvqRow> run_dvq(const Eigen::MatrixXd& data,
                            const std::optional<std::vector<int>>& labels,
                            const DvqConfig& config) {
  const Eigen::Index n = data.rows();
  if (n < 2) throw ValidationError("dvq: need at least two points");
  if (labels && static_cast<Eigen::Index>(labels->size()) != n) {
    throw ValidationError("dvq: label count does not match data rows");
  }
  if (!(config.summary_fraction > 0.0 && config.summary_fraction <= 1.0)) {
    throw ValidationError("dvq: summary fraction must lie in (0, 1]");
  }

  std::vector<DvqRow> rows;
  for (const int S : config.split_counts) {
    if (S < 1 || S > n) throw ValidationError("dvq: invalid split count");
    const auto order =
        shuffled_indices(n, derive_seed(config.seed, 0x50u + static_cast<std::uint64_t>(S)));

    std::vector<DiscreteMeasure> summaries;
    Eigen::Index summary_atoms = 0;
    for (int s = 0; s < S; ++s) {
      const auto begin = static_cast<Eigen::Index>(static_cast<std::int64_t>(s) * n / S);
      const auto end = static_cast<Eigen::Index>(static_cast<std::int64_t>(s + 1) * n / S);
      Eigen::MatrixXd chunk(end - begin, data.cols());
      for (Eigen::Index t = begin; t < end; ++t) {
        chunk.row(t - begin) = data.row(order[static_cast<std::size_t>(t)]);
      }
      const int ks = std::max(
          1, static_cast<int>(std::llround(config.summary_fraction *
                                           static_cast<double>(end - begin))));
      const KMeansResult compressed =
          kmeans(chunk, std::nullopt, ks,
                 derive_seed(config.seed, 0x5100u + static_cast<std::uint64_t>(S) * 100u +
                                              static_cast<std::uint64_t>(s)));

      // Cluster masses become the summary weights; drop empty clusters.
      Eigen::VectorXd counts = Eigen::VectorXd::Zero(ks);
      for (const int a : compressed.assignments) counts[a] += 1.0;
      const auto kept = static_cast<Eigen::Index>((counts.array() > 0.0).count());
      Eigen::MatrixXd centers(kept, data.cols());
      Eigen::VectorXd masses(kept);
      Eigen::Index at = 0;
      for (int c = 0; c < ks; ++c) {
        if (counts[c] > 0.0) {
          centers.row(at) = compressed.centers.row(c);
          masses[at] = counts[c] / static_cast<double>(end - begin);
          ++at;
        }
      }
      summary_atoms += kept;
      summaries.push_back(make_measure(std::move(centers), std::move(masses)));
    }

    for (const int k : config.cluster_counts) {
      if (static_cast<Eigen::Index>(k) > summary_atoms) {
        throw ValidationError("dvq: k = " + std::to_string(k) + " exceeds the " +
                              std::to_string(summary_atoms) + " pooled summary atoms");
      }
      SolverOptions opts;
      opts.support_size = k;
      opts.tolerance = config.tolerance;
      opts.max_iterations = config.max_iterations;
      opts.threads = config.threads;
      opts.rng_seed = derive_seed(config.seed, 0x5200u + static_cast<std::uint64_t>(S) * 1000u +
                                                   static_cast<std::uint64_t>(k));
      const BarycenterState state = solve(make_family(summaries), opts);
      const auto assignment = nearest_centroid_assignment(data, state.support);
      rows.push_back(score_partition(data, labels, assignment, k, S, "dvq"));
    }
  }

  for (const int k : config.cluster_counts) {
    const KMeansResult baseline =
        kmeans(data, std::nullopt, k,
               derive_seed(config.seed, 0x53u + static_cast<std::uint64_t>(k)));
    rows.push_back(score_partition(data, labels, baseline.assignments, k, 0, "kmeans"));
  }
  return rows;
}

Eigen::MatrixXd make_blobs(int n, int d, int k, double separation, std::uint64_t seed,
                           std::vector<int>* labels) {
  if (n < 1 || d < 1 || k < 1 || k > n) throw ValidationError("make_blobs: bad shape");
  SplitMix64 rng(seed);

  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, d);
  for (int c = 0; c < k; ++c) {
    if (c < d) {
      centers(c, c) = separation;
    } else {
      Eigen::VectorXd direction(d);
      for (Eigen::Index t = 0; t < d; ++t) direction[t] = rng.next_normal();
      centers.row(c) = separation * direction.normalized().transpose();
    }
  }

  Eigen::MatrixXd points(n, d);
  if (labels) labels->assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int c = static_cast<int>(static_cast<std::int64_t>(i) * k / n);
    for (int t = 0; t < d; ++t) points(i, t) = centers(c, t) + rng.next_normal();
    if (labels) (*labels)[static_cast<std::size_t>(i)] = c;
  }
  return points;
}

std::vector<std::pair<GrayImage, std::string>> make_glyph_dataset(int per_class,
                                                                  std::uint64_t seed) {
  if (per_class < 1) throw ValidationError("make_glyph_dataset: per_class must be positive");
  constexpr int kSize = 28;
  std::vector<std::pair<GrayImage, std::string>> images;
  images.reserve(2 * static_cast<std::size_t>(per_class));

  const std::vector<std::string> classes = {"ring", "square"};
  for (std::size_t cls = 0; cls < classes.size(); ++cls) {
    for (int item = 0; item < per_class; ++item) {
      SplitMix64 rng(derive_seed(seed, cls * 100003u + static_cast<std::uint64_t>(item)));
      const int jitter_r = static_cast<int>(rng.next_below(5)) - 2;
      const int jitter_c = static_cast<int>(rng.next_below(5)) - 2;

      Eigen::MatrixXd pixels(kSize, kSize);
      for (int r = 0; r < kSize; ++r) {
        for (int c = 0; c < kSize; ++c) pixels(r, c) = 0.15 * rng.next_double();
      }
      const double center_r = 13.5 + jitter_r;
      const double center_c = 13.5 + jitter_c;
      for (int r = 0; r < kSize; ++r) {
        for (int c = 0; c < kSize; ++c) {
          bool foreground = false;
          if (classes[cls] == "square") {
            foreground = std::abs(r - center_r) <= 5.0 && std::abs(c - center_c) <= 5.0;
          } else {
            const double radius = std::hypot(r - center_r, c - center_c);
            foreground = radius >= 6.0 && radius <= 9.0;
          }
          if (foreground) pixels(r, c) = 0.7 + 0.3 * rng.next_double();
        }
      }
      images.emplace_back(make_image(std::move(pixels)), classes[cls]);
    }
  }
  return images;
}

std::vector<LabeledMeasure> to_labeled_measures(
    const std::vector<std::pair<GrayImage, std::string>>& images) {
  std::vector<LabeledMeasure> measures;
  measures.reserve(images.size());
  for (const auto& [image, label] : images) {
    measures.push_back(LabeledMeasure{image_to_measure(image), label});
  }
  return measures;
}

}  // namespace otbary
