#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "otbary/imaging.hpp"
#include "otbary/measure.hpp"

namespace otbary {

// Point-cloud schema: header `x1,...,xd[,w]`, one atom per row; a
// missing `w` column means uniform weights. Parse failures carry the
// offending row number.
DiscreteMeasure read_measure_csv(const std::filesystem::path& path);
void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& measure);

// Raster schema: H rows of W comma-separated intensities, no header.
GrayImage read_image_csv(const std::filesystem::path& path);
void write_image_csv(const std::filesystem::path& path, const GrayImage& image);

// `filename,label` pairs with a header row.
std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::filesystem::path& path);

// Single `label` column with a header row, one integer per data row.
std::vector<int> read_label_column_csv(const std::filesystem::path& path);

// Generic numeric matrix under the x1..xd header (a measure file
// without weights); used for raw clustering data.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

}  // namespace otbary
