#include "otbary/imaging.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "otbary/errors.hpp"

namespace otbary {

GrayImage make_image(Eigen::MatrixXd pixels) {
  if (pixels.rows() < 1 || pixels.cols() < 1) {
    throw ValidationError("image: empty raster");
  }
  if (!pixels.allFinite() || pixels.minCoeff() < 0.0 || pixels.maxCoeff() > 1.0) {
    throw ValidationError("image: intensities must lie in [0, 1]");
  }
  return GrayImage{std::move(pixels)};
}

double otsu_threshold(const GrayImage& image, int bins) {
  if (bins < 2) throw ValidationError("otsu_threshold: need at least 2 bins");
  const auto& pixels = image.pixels;
  const double total = static_cast<double>(pixels.size());

  std::vector<double> histogram(static_cast<std::size_t>(bins), 0.0);
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      const int bin = std::min(static_cast<int>(pixels(r, c) * bins), bins - 1);
      histogram[static_cast<std::size_t>(bin)] += 1.0;
    }
  }

  // Sweep split points with running class mass and mean: classes are
  // bins [0, k) and [k, bins); candidate threshold is the edge k/bins.
  double grand_mean = 0.0;
  for (int b = 0; b < bins; ++b) grand_mean += b * histogram[static_cast<std::size_t>(b)];
  grand_mean /= total;

  double best_variance = 0.0;
  int best_split = -1;
  double mass_low = 0.0;
  double sum_low = 0.0;
  for (int k = 1; k < bins; ++k) {
    mass_low += histogram[static_cast<std::size_t>(k - 1)];
    sum_low += (k - 1) * histogram[static_cast<std::size_t>(k - 1)];
    const double mass_high = total - mass_low;
    if (mass_low == 0.0 || mass_high == 0.0) continue;
    const double mean_low = sum_low / mass_low;
    const double mean_high = (grand_mean * total - sum_low) / mass_high;
    const double diff = mean_low - mean_high;
    const double variance = mass_low * mass_high * diff * diff;
    if (variance > best_variance) {
      best_variance = variance;
      best_split = k;
    }
  }
  if (best_split < 0) {
    throw ValidationError("otsu_threshold: no separable intensity classes (constant image?)");
  }
  return static_cast<double>(best_split) / static_cast<double>(bins);
}

DiscreteMeasure image_to_measure(const GrayImage& image) {
  const double threshold = otsu_threshold(image);
  const auto& pixels = image.pixels;

  Eigen::Index count = 0;
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      if (pixels(r, c) > threshold) ++count;
    }
  }
  if (count == 0) throw ValidationError("image_to_measure: empty foreground");

  Eigen::MatrixXd support(count, 2);
  Eigen::Index row = 0;
  for (Eigen::Index r = 0; r < pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < pixels.cols(); ++c) {
      if (pixels(r, c) > threshold) {
        support(row, 0) = static_cast<double>(r);
        support(row, 1) = static_cast<double>(c);
        ++row;
      }
    }
  }
  return make_measure(std::move(support));
}

}  // namespace otbary
