#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scatnet/scattering.hpp"

namespace scatnet {

/// Row-major matrix of feature vectors, one row per example.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(std::span<const double> values);
  void reserve_rows(std::size_t n) { data_.reserve(n * cols_); }

  std::span<const double> values() const { return data_; }
  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Per-column affine map to zero mean and unit (population) variance.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_std;  // 0 for constant columns
  double epsilon = 1e-12;
  std::vector<std::size_t> constant_columns;

  std::size_t size() const { return mean.size(); }
  bool operator==(const Standardizer&) const = default;
};

/// Column means and population standard deviations (two passes). Columns
/// whose std is below epsilon are zeroed by the map and listed.
Standardizer fit_standardizer(const FeatureMatrix& train, double epsilon = 1e-12);

std::vector<double> apply_standardizer(const Standardizer& s, std::span<const double> v);
void apply_standardizer_inplace(const Standardizer& s, FeatureMatrix& m);

/// Inverse map on non-constant columns; constant columns come back as the mean.
std::vector<double> unstandardize(const Standardizer& s, std::span<const double> v);

/// Contents of an SCF1 file.
struct FeatureFile {
  std::vector<PathInfo> paths;
  FeatureMatrix matrix;
  std::optional<std::vector<std::uint32_t>> labels;
};

// SCF1 layout (little endian):
//   "SCF1", u32 version, u64 width, u64 rows, u8 has_labels,
//   u64 path-table byte length, UTF-8 path-table text,
//   rows * width f32 values (row-major), then rows u32 labels if present.
inline constexpr std::uint32_t kFeatureFileVersion = 1;

void write_features(std::ostream& out, const FeatureFile& file);

/// Row-at-a-time SCF1 output for batches too large to hold in memory. The
/// header is written on construction; exactly `rows` rows must follow.
class FeatureFileWriter {
 public:
  FeatureFileWriter(std::ostream& out, const std::vector<PathInfo>& paths, std::size_t width,
                    std::size_t rows, bool has_labels);
  void write_row(std::span<const double> values);
  /// Labels are required iff the header announced them.
  void finish(std::span<const std::uint32_t> labels = {});

 private:
  std::ostream& out_;
  std::size_t width_;
  std::size_t rows_;
  bool has_labels_;
  std::size_t written_ = 0;
};
FeatureFile read_features(std::istream& in);
void write_features(const std::string& path, const FeatureFile& file);
FeatureFile read_features(const std::string& path);

// SCS1 layout: "SCS1", u32 version, u64 width, f64 epsilon,
//   width f64 means, width f64 inverse stds.
inline constexpr std::uint32_t kStandardizerFileVersion = 1;

void write_standardizer(std::ostream& out, const Standardizer& s);
Standardizer read_standardizer(std::istream& in);
void write_standardizer(const std::string& path, const Standardizer& s);
Standardizer read_standardizer(const std::string& path);

}  // namespace scatnet
