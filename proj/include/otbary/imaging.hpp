#pragma once

#include <Eigen/Core>

#include "otbary/measure.hpp"

namespace otbary {

// Grayscale raster with intensities in [0, 1].
struct GrayImage {
  Eigen::MatrixXd pixels;  // H x W
};

GrayImage make_image(Eigen::MatrixXd pixels);

// Otsu's method on a `bins`-level histogram of [0, 1]: returns the bin
// edge maximizing between-class variance, ties broken toward the lower
// edge. Throws on images without two separable intensity levels.
double otsu_threshold(const GrayImage& image, int bins = 256);

// Uniform mass on the (row, col) coordinates of pixels strictly above
// the Otsu threshold. Row index increases downward; no vertical flip.
DiscreteMeasure image_to_measure(const GrayImage& image);

}  // namespace otbary
