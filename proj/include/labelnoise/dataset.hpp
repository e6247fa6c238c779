#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "labelnoise/core.hpp"
#include "labelnoise/rng.hpp"

namespace labelnoise {

struct Dataset {
  Matrix x;
  std::vector<std::int8_t> y;
  std::size_t size() const { return y.size(); }
};

// Optional remap of digit labels {0..9} onto {+1, -1}; rows with other digits
// are dropped.
struct DigitRemap {
  int positive;
  int negative;
};

namespace detail {

inline std::int8_t map_label(double raw, const std::optional<DigitRemap>& remap, bool& keep) {
  keep = true;
  if (remap) {
    int digit = static_cast<int>(std::lround(raw));
    if (std::abs(raw - digit) > 1e-9 || digit < 0 || digit > 9)
      throw std::runtime_error("dataset: label is not a digit in 0..9");
    if (digit == remap->positive) return 1;
    if (digit == remap->negative) return -1;
    keep = false;
    return 0;
  }
  if (raw == 1.0) return 1;
  if (raw == -1.0) return -1;
  throw std::runtime_error("dataset: label must be +1 or -1 (or supply a digit remap)");
}

inline std::uint32_t read_be_u32(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(std::string("idx: truncated ") + what);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

}  // namespace detail

// CSV: one example per row, first column the label, remaining columns the
// features. Labels are +-1, or digits 0..9 with a remap.
inline Dataset load_csv(const std::string& path, std::optional<DigitRemap> remap = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::vector<std::int8_t> labels;
  std::string line;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        fields.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("load_csv: bad number at line " + std::to_string(line_no));
      }
    }
    if (fields.size() < 2)
      throw std::runtime_error("load_csv: row needs a label and at least one feature (line " +
                               std::to_string(line_no) + ")");
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      throw std::runtime_error("load_csv: ragged row at line " + std::to_string(line_no));
    bool keep = true;
    std::int8_t label = detail::map_label(fields[0], remap, keep);
    if (!keep) continue;
    labels.push_back(label);
    fields.erase(fields.begin());
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) throw std::runtime_error("load_csv: no usable rows in " + path);
  Dataset d;
  d.x = Matrix(rows.size(), width - 1);
  d.y = std::move(labels);
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), d.x.row(i).begin());
  return d;
}

// IDX image/label file pair (big-endian; magic 0x00000803 for images,
// 0x00000801 for labels). Pixels are scaled to [0,1] by the maximum observed
// value.
inline Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                        DigitRemap remap) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("load_idx: cannot open " + images_path);
  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("load_idx: cannot open " + labels_path);

  if (detail::read_be_u32(img, "image magic") != 0x00000803u)
    throw std::runtime_error("load_idx: bad image magic (want 0x00000803)");
  std::uint32_t n_img = detail::read_be_u32(img, "image count");
  std::uint32_t rows = detail::read_be_u32(img, "image rows");
  std::uint32_t cols = detail::read_be_u32(img, "image cols");

  if (detail::read_be_u32(lab, "label magic") != 0x00000801u)
    throw std::runtime_error("load_idx: bad label magic (want 0x00000801)");
  std::uint32_t n_lab = detail::read_be_u32(lab, "label count");
  if (n_img != n_lab) throw std::runtime_error("load_idx: image/label counts differ");

  const std::size_t dim = static_cast<std::size_t>(rows) * cols;
  std::vector<unsigned char> pixels(dim);
  std::vector<std::vector<unsigned char>> kept_pixels;
  std::vector<std::int8_t> labels;
  for (std::uint32_t i = 0; i < n_img; ++i) {
    if (!img.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(dim)))
      throw std::runtime_error("load_idx: truncated image data");
    unsigned char raw_label;
    if (!lab.read(reinterpret_cast<char*>(&raw_label), 1))
      throw std::runtime_error("load_idx: truncated label data");
    if (raw_label > 9) throw std::runtime_error("load_idx: label out of 0..9");
    if (raw_label == remap.positive || raw_label == remap.negative) {
      kept_pixels.push_back(pixels);
      labels.push_back(raw_label == remap.positive ? 1 : -1);
    }
  }
  if (kept_pixels.empty()) throw std::runtime_error("load_idx: no instances match the digit pair");

  unsigned char max_pixel = 0;
  for (const auto& p : kept_pixels)
    for (unsigned char v : p) max_pixel = std::max(max_pixel, v);
  double scale = max_pixel > 0 ? 1.0 / static_cast<double>(max_pixel) : 1.0;

  Dataset d;
  d.x = Matrix(kept_pixels.size(), dim);
  d.y = std::move(labels);
  for (std::size_t i = 0; i < kept_pixels.size(); ++i) {
    auto row = d.x.row(i);
    for (std::size_t j = 0; j < dim; ++j) row[j] = kept_pixels[i][j] * scale;
  }
  return d;
}

// Bundled stand-in for the digit tasks: two Gaussian blobs in 64 dimensions
// with a geometrically decaying variance spectrum (flattened image data is
// strongly anisotropic) and the class displacement carried by the
// higher-variance coordinates. The least-squares hyperplane scores land near
// +-2, matching the score scale the noise sweep expects.
inline Dataset make_digits_like(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_digits_like: need n >= 2");
  constexpr std::size_t d = 64;
  constexpr double decay = 0.94;  // per-coordinate std from 1.0 down to ~0.02
  constexpr double amplitude = 1.3;
  Rng rng = Rng(seed).stream(0xd161);
  std::vector<double> sigma(d), mean(d);
  double s = 1.0;
  for (std::size_t j = 0; j < d; ++j) {
    sigma[j] = s;
    mean[j] = j < d / 2 ? amplitude * s * (rng.bernoulli(0.5) ? 1.0 : -1.0) : 0.0;
    s *= decay;
  }
  Dataset out;
  out.x = Matrix(n, d);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int label = (i % 2 == 0) ? 1 : -1;  // balanced classes
    auto row = out.x.row(i);
    for (std::size_t j = 0; j < d; ++j)
      row[j] = label * mean[j] + sigma[j] * rng.normal();
    out.y[i] = static_cast<std::int8_t>(label);
  }
  return out;
}

// Appends a constant-1 column (bias feature for the linear baselines).
inline Matrix with_bias_column(const Matrix& x) {
  Matrix out(x.rows, x.cols + 1);
  for (std::size_t i = 0; i < x.rows; ++i) {
    auto src = x.row(i);
    auto dst = out.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[x.cols] = 1.0;
  }
  return out;
}

}  // namespace labelnoise
