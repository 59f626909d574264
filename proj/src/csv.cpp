#include "otbary/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "otbary/errors.hpp"

namespace otbary {

namespace {

std::string location(const std::filesystem::path& path, std::size_t row) {
  return path.string() + ":" + std::to_string(row);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    std::size_t start = 0;
    while (start < field.size() && field[start] == ' ') ++start;
    fields.push_back(field.substr(start));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& field, const std::filesystem::path& path,
                    std::size_t row) {
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(location(path, row) + ": cannot parse number '" + field + "'");
  }
  return value;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) throw ValidationError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Header must read x1..xd, optionally followed by w.
Eigen::Index parse_point_header(const std::vector<std::string>& fields,
                                const std::filesystem::path& path, bool* has_weights) {
  *has_weights = !fields.empty() && fields.back() == "w";
  const auto d = static_cast<Eigen::Index>(fields.size()) - (*has_weights ? 1 : 0);
  if (d < 1) throw ValidationError(location(path, 1) + ": no coordinate columns");
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::string expected = "x" + std::to_string(k + 1);
    if (fields[static_cast<std::size_t>(k)] != expected) {
      throw ValidationError(location(path, 1) + ": expected header column '" + expected +
                            "', found '" + fields[static_cast<std::size_t>(k)] + "'");
    }
  }
  return d;
}

}  // namespace

DiscreteMeasure read_measure_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 2) {
    throw ValidationError(path.string() + ": need a header row and at least one atom");
  }
  bool has_weights = false;
  const Eigen::Index d = parse_point_header(split_fields(lines[0]), path, &has_weights);

  const auto m = static_cast<Eigen::Index>(lines.size()) - 1;
  Eigen::MatrixXd points(m, d);
  Eigen::VectorXd weights(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) + 2;
    const auto fields = split_fields(lines[static_cast<std::size_t>(i) + 1]);
    const auto expected = static_cast<std::size_t>(d) + (has_weights ? 1 : 0);
    if (fields.size() != expected) {
      throw ValidationError(location(path, row) + ": expected " + std::to_string(expected) +
                            " fields, found " + std::to_string(fields.size()));
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      points(i, k) = parse_number(fields[static_cast<std::size_t>(k)], path, row);
    }
    if (has_weights) {
      weights[i] = parse_number(fields[static_cast<std::size_t>(d)], path, row);
    }
  }
  if (has_weights) return make_measure(std::move(points), std::move(weights));
  return make_measure(std::move(points));
}

void write_measure_csv(const std::filesystem::path& path, const DiscreteMeasure& measure) {
  std::ofstream stream(path);
  if (!stream) throw ValidationError("cannot write " + path.string());
  stream.precision(17);
  for (Eigen::Index k = 0; k < measure.dim(); ++k) {
    stream << "x" << (k + 1) << ",";
  }
  stream << "w\n";
  for (Eigen::Index i = 0; i < measure.size(); ++i) {
    for (Eigen::Index k = 0; k < measure.dim(); ++k) {
      stream << measure.support()(i, k) << ",";
    }
    stream << measure.weights()[i] << "\n";
  }
}

GrayImage read_image_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ValidationError(path.string() + ": empty image");
  const auto fields0 = split_fields(lines[0]);
  const auto width = static_cast<Eigen::Index>(fields0.size());

  Eigen::MatrixXd pixels(static_cast<Eigen::Index>(lines.size()), width);
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (static_cast<Eigen::Index>(fields.size()) != width) {
      throw ValidationError(location(path, r + 1) + ": ragged row (" +
                            std::to_string(fields.size()) + " of " + std::to_string(width) +
                            " fields)");
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      pixels(static_cast<Eigen::Index>(r), c) =
          parse_number(fields[static_cast<std::size_t>(c)], path, r + 1);
    }
  }
  return make_image(std::move(pixels));
}

void write_image_csv(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream stream(path);
  if (!stream) throw ValidationError("cannot write " + path.string());
  stream.precision(17);
  for (Eigen::Index r = 0; r < image.pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < image.pixels.cols(); ++c) {
      if (c > 0) stream << ",";
      stream << image.pixels(r, c);
    }
    stream << "\n";
  }
}

std::vector<std::pair<std::string, std::string>> read_labels_csv(
    const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || split_fields(lines[0]) != std::vector<std::string>{"filename", "label"}) {
    throw ValidationError(path.string() + ": expected header 'filename,label'");
  }
  std::vector<std::pair<std::string, std::string>> labels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ValidationError(location(path, r + 1) + ": expected 'filename,label'");
    }
    labels.emplace_back(fields[0], fields[1]);
  }
  if (labels.empty()) throw ValidationError(path.string() + ": no labeled files");
  return labels;
}

std::vector<int> read_label_column_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || split_fields(lines[0]) != std::vector<std::string>{"label"}) {
    throw ValidationError(path.string() + ": expected header 'label'");
  }
  std::vector<int> labels;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    labels.push_back(static_cast<int>(parse_number(lines[r], path, r + 1)));
  }
  if (labels.empty()) throw ValidationError(path.string() + ": no labels");
  return labels;
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  const DiscreteMeasure measure = read_measure_csv(path);
  return measure.support();
}

}  // namespace otbary
