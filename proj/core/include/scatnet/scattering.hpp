#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scatnet/config.hpp"
#include "scatnet/filterbank.hpp"
#include "scatnet/grid.hpp"

namespace scatnet {

/// Provenance of one pooled block of the feature vector. Unused indices are -1.
/// `angular` indexes AngularFilterBank::filter(): wavelets by octave, then the
/// angular average.
struct PathInfo {
  int order = 0;
  int channel = 0;
  int j1 = -1;
  int theta1 = -1;
  int j2 = -1;
  int theta2 = -1;
  int angular = -1;
  int rows = 0;
  int cols = 0;
  std::size_t offset = 0;

  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
  bool operator==(const PathInfo&) const = default;
};

struct ScatteringFeatures {
  std::vector<double> values;
  std::vector<PathInfo> paths;

  std::span<const double> block(std::size_t path) const {
    return std::span<const double>(values).subspan(paths[path].offset, paths[path].size());
  }
};

/// U1 = |x * psi_{j1, theta1}| at stride max(1, 2^(j1 - 1)).
struct Layer1Tensor {
  std::vector<int> scales;  // j1 scale indices
  int num_angles = 0;
  std::vector<Plane> slices;  // index: scale_pos * num_angles + theta1

  const Plane& at(int scale_pos, int theta1) const {
    return slices[static_cast<std::size_t>(scale_pos) * num_angles + theta1];
  }
};

struct Layer2Path {
  int j1 = 0;
  int j2 = 0;
  int theta2 = 0;
  int angular = 0;
  int theta1 = 0;
  bool operator==(const Layer2Path&) const = default;
};

struct Layer2Tensor {
  std::vector<Layer2Path> paths;
  std::vector<Plane> planes;
};

/// S0 = x * phi_J sampled at stride 2^output_stride_log2.
Plane layer0(const Plane& x, const SpatialFilterBank& bank, int output_stride_log2);

Layer1Tensor layer1(const Plane& x, const SpatialFilterBank& bank, const ScatteringConfig& config);

/// Second layer: for every admissible (j1, j2), spatial wavelet on each
/// theta1 slice, circular convolution along theta1 with every angular filter,
/// one modulus. The scale axis j1 is carried through untouched.
Layer2Tensor layer2(const Layer1Tensor& u1, const SpatialFilterBank& bank2,
                    const AngularFilterBank& angular, const ScatteringConfig& config);

/// Same computation as layer2 but hands each (j1, j2, theta2, angular) group
/// of K1 planes (indexed by theta1) to `sink` instead of storing them.
using Layer2Sink = std::function<void(const Layer2Path& first, std::vector<Plane>& planes)>;
void layer2_stream(const Layer1Tensor& u1, const SpatialFilterBank& bank2,
                   const AngularFilterBank& angular, const ScatteringConfig& config,
                   const Layer2Sink& sink);

/// Slice * phi_J (periodized to the slice's resolution) sampled at stride
/// 2^output_stride_log2 of the input grid.
Plane pool_average(const Plane& slice, const SpatialFilterBank& bank, int output_stride_log2);

/// Maximum over square windows of 2^window_log2 samples; windows tile the
/// slice, or advance by half a window when overlapping.
Plane pool_max(const Plane& slice, int window_log2, bool overlapping);

/// Block layout of scatter() output, in order.
std::vector<PathInfo> path_table(const ScatteringConfig& config);

/// Closed-form feature length.
std::size_t count_features(const ScatteringConfig& config);

/// Text form of a path table, one block per line; stored in feature files.
std::string format_path_table(const std::vector<PathInfo>& paths);
std::vector<PathInfo> parse_path_table(const std::string& text);

/// Owns the filter banks for one configuration; immutable and shareable
/// across threads once constructed.
class ScatteringTransform {
 public:
  explicit ScatteringTransform(ScatteringConfig config);

  const ScatteringConfig& config() const { return config_; }
  const FilterBanks& banks() const { return banks_; }
  std::size_t feature_count() const { return count_features(config_); }

  /// One plane per channel (1 for Gray, 3 for YUV), each image_size square.
  ScatteringFeatures scatter(std::span<const Plane> channels) const;
  ScatteringFeatures scatter(const Plane& gray) const;

 private:
  Plane pool(const Plane& slice) const;

  ScatteringConfig config_;
  FilterBanks banks_;
};

}  // namespace scatnet
