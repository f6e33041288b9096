#pragma once

#include <istream>
#include <string>
#include <vector>

#include "scatnet/filterbank.hpp"

namespace scatnet {

enum class Pooling { Average, MaxNonOverlap, MaxOverlap };
enum class ColorMode { Gray, YUV };
// Admissible second-layer scales: j2 >= j1 (Inclusive) or j2 > j1 (Strict).
enum class J2Rule { Inclusive, Strict };

/// Every structural parameter of the transform. Scale values in j1_set are
/// sub-octave indices: the dilation is 2^(index / Q).
struct ScatteringConfig {
  int image_size = 128;
  int J = 5;
  int K1 = 8;
  int K2 = 8;
  int Q = 1;
  std::vector<int> j1_set;  // empty: every index in [0, Q*J)
  J2Rule j2_rule = J2Rule::Inclusive;
  std::vector<int> l2_set = {0, 1, 2};
  WaveletFamily family = WaveletFamily::MorletComplex;
  Pooling pooling = Pooling::Average;
  int pool_window_log2 = 5;
  int output_stride_log2 = -1;  // -1: J - 1
  ColorMode color = ColorMode::Gray;
  MorletParams morlet;
  double lowpass_sigma = kDefaultLowpassSigma;
  int reflect_pad = 0;  // pixels of mirrored border added at ingestion

  /// Throws ParameterError on the first violated constraint.
  void validate() const;

  std::vector<int> resolved_j1_set() const;
  int resolved_output_stride_log2() const { return output_stride_log2 < 0 ? J - 1 : output_stride_log2; }
  /// Layer-2 spatial scale indices admissible after j1.
  std::vector<int> j2_for(int j1) const;
  /// Every scale index the second spatial bank needs.
  std::vector<int> layer2_scales() const;
  int channels() const { return color == ColorMode::YUV ? 3 : 1; }

  /// log2 of the subsampling applied after filtering at scale index s:
  /// stride max(1, 2^(floor(s/Q) - 1)).
  int stride_log2(int scale_index) const;

  bool operator==(const ScatteringConfig&) const = default;
};

/// Parses `key = value` lines; `#` starts a comment; unknown keys are errors.
/// Keys not present keep their default.
ScatteringConfig parse_config(std::istream& in);
ScatteringConfig load_config(const std::string& path);
std::string format_config(const ScatteringConfig& config);

}  // namespace scatnet
