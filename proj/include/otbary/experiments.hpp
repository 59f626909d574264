#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otbary/imaging.hpp"
#include "otbary/measure.hpp"
#include "otbary/metrics.hpp"

namespace otbary {

// ---------------------------------------------------------------------------
// Gaussian benchmark: four random bivariate components, closed-form
// Bures-Wasserstein oracle, free-support barycenters over an atom grid.

struct GaussBenchConfig {
  int repeats = 20;
  std::vector<int> atom_grid = {10, 50, 150};
  int samples_per_component = 100;
  int mc_sample_size = 100;
  int mc_repeats = 100;
  double tolerance = 1e-6;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct GaussBenchRow {
  int rep = 0;
  int n_atoms = 0;
  double w2_mc = 0.0;
  double w2_std_error = 0.0;
  double mean_err = 0.0;
  double cov_err = 0.0;
};

std::vector<GaussBenchRow> run_gauss_bench(const GaussBenchConfig& config);

// ---------------------------------------------------------------------------
// WASP: subset power posteriors of a conjugate linear regression,
// aggregated by a free-support barycenter over their samples.

struct WaspConfig {
  int n = 2000;
  int p = 2;
  std::vector<int> subset_counts = {5};       // K
  std::vector<int> support_sizes = {10, 100, 200};  // m
  int repeats = 10;
  int draws_per_subset = 200;
  int mc_sample_size = 100;
  int mc_repeats = 100;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct WaspRecord {
  int K = 0;
  int m = 0;  // 0 marks the raw single-subset-sample baseline
  int rep = 0;
  std::uint64_t seed = 0;
  double w2_to_oracle = 0.0;
  double mean_err = 0.0;
  double cov_err = 0.0;
};

std::vector<WaspRecord> run_wasp(const WaspConfig& config);

// ---------------------------------------------------------------------------
// Image classification: per-class barycenter prototypes at varying
// support sizes, nearest-prototype assignment under W2.

struct LabeledMeasure {
  DiscreteMeasure measure;
  std::string label;
};

struct ClassifyConfig {
  std::vector<int> support_sizes = {10, 20, 40, 80};
  double tolerance = 1e-6;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ClassifyRow {
  int m = 0;
  ClassificationReport report;
};

std::vector<ClassifyRow> run_classify(const std::vector<LabeledMeasure>& train,
                                      const std::vector<LabeledMeasure>& test,
                                      const ClassifyConfig& config);

// ---------------------------------------------------------------------------
// Distributed vector quantization: split, compress each subset to a
// fractional k-means summary, cluster the summaries' barycenter atoms,
// and evaluate against plain k-means.

struct DvqConfig {
  std::vector<int> cluster_counts = {3};  // k
  std::vector<int> split_counts = {5};    // S
  double summary_fraction = 0.1;
  double tolerance = 1e-6;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct DvqRow {
  int k = 0;
  int S = 0;  // 0 marks the vanilla k-means baseline
  std::string method;
  double ari = 0.0;   // NaN without ground-truth labels
  double nmi = 0.0;   // NaN without ground-truth labels
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
};

std::vector<DvqRow> run_dvq(const Eigen::MatrixXd& data,
                            const std::optional<std::vector<int>>& labels,
                            const DvqConfig& config);

// ---------------------------------------------------------------------------
// Synthetic inputs.

// Isotropic Gaussian blobs around well-separated centers; labels out.
Eigen::MatrixXd make_blobs(int n, int d, int k, double separation, std::uint64_t seed,
                           std::vector<int>* labels);

// Two 28x28 glyph classes ("square": filled block, "ring": annulus)
// with positional jitter and background noise; per_class images each.
std::vector<std::pair<GrayImage, std::string>> make_glyph_dataset(int per_class,
                                                                  std::uint64_t seed);

// Images to labeled measures via Otsu thresholding.
std::vector<LabeledMeasure> to_labeled_measures(
    const std::vector<std::pair<GrayImage, std::string>>& images);

}  // namespace otbary
