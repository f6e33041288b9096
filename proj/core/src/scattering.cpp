#include "scatnet/scattering.hpp"

#include <algorithm>
#include <sstream>

#include "scatnet/conv_engine.hpp"
#include "scatnet/error.hpp"
#include "scatnet/fft.hpp"

namespace scatnet {
namespace {

void check_square(const Plane& x, int n) {
  if (x.rows() != n || x.cols() != n)
    throw ParameterError("expected a " + std::to_string(n) + "x" + std::to_string(n) +
                         " input, got " + std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
}

Plane nonlinearity(const ComplexPlane& p, WaveletFamily family) {
  return family == WaveletFamily::HaarReal ? abs_real(p) : modulus(p);
}

// Output grid of one pooled S1/S2 block.
std::pair<int, int> pooled_shape(const ScatteringConfig& config) {
  const int n = config.image_size;
  switch (config.pooling) {
    case Pooling::Average: {
      const int side = n >> config.resolved_output_stride_log2();
      return {side, side};
    }
    case Pooling::MaxNonOverlap: {
      const int side = n >> config.pool_window_log2;
      return {side, side};
    }
    case Pooling::MaxOverlap: {
      const int side = 2 * (n >> config.pool_window_log2) - 1;
      return {side, side};
    }
  }
  throw InternalError("unknown pooling mode");
}

}  // namespace

Plane layer0(const Plane& x, const SpatialFilterBank& bank, int output_stride_log2) {
  check_square(x, bank.grid_size);
  return real_part(conv2d_fft(x, bank.lowpass(0), output_stride_log2));
}

Layer1Tensor layer1(const Plane& x, const SpatialFilterBank& bank, const ScatteringConfig& config) {
  check_square(x, bank.grid_size);
  Layer1Tensor out;
  out.scales = bank.scales;
  out.num_angles = bank.num_angles;
  out.slices.reserve(bank.psi.size());
  const ComplexGrid x_hat = fft::forward(x.grid);
  for (int sp = 0; sp < bank.num_scales(); ++sp) {
    const int stride = config.stride_log2(bank.scales[sp]);
    for (int k = 0; k < bank.num_angles; ++k)
      out.slices.push_back(
          nonlinearity(conv2d_spectrum(x_hat, x.scale_log2, bank.wavelet(sp, k), stride), bank.family));
  }
  return out;
}

void layer2_stream(const Layer1Tensor& u1, const SpatialFilterBank& bank2,
                   const AngularFilterBank& angular, const ScatteringConfig& config,
                   const Layer2Sink& sink) {
  if (angular.num_angles != u1.num_angles)
    throw ParameterError("angular bank length does not match the U1 orientation count");
  std::vector<std::vector<Complex>> angular_filters;
  for (int a = 0; a < angular.num_filters(); ++a) angular_filters.push_back(angular.filter(a));

  for (std::size_t sp1 = 0; sp1 < u1.scales.size(); ++sp1) {
    const int j1 = u1.scales[sp1];
    // Transform each orientation slice once; reused by every (j2, theta2).
    std::vector<ComplexGrid> slice_hat;
    int resolution = 0;
    for (int t1 = 0; t1 < u1.num_angles; ++t1) {
      const Plane& slice = u1.at(static_cast<int>(sp1), t1);
      resolution = slice.scale_log2;
      slice_hat.push_back(fft::forward(slice.grid));
    }
    for (int j2 : config.j2_for(j1)) {
      const int sp2 = bank2.scale_position(j2);
      const int subsample = config.stride_log2(j2) - resolution;
      if (subsample < 0) throw InternalError("layer-2 stride finer than its input");
      for (int t2 = 0; t2 < bank2.num_angles; ++t2) {
        const ComplexGrid& psi = bank2.wavelet(sp2, t2, resolution);
        AngleStack stack;
        stack.reserve(slice_hat.size());
        for (const auto& hat : slice_hat)
          stack.push_back(conv2d_spectrum(hat, resolution, psi, subsample));
        // No wavelet along j1: the scale axis is passed through as identity.
        auto filtered = circular_conv1d_angle(stack, angular_filters);
        for (int a = 0; a < static_cast<int>(filtered.size()); ++a) {
          std::vector<Plane> planes;
          planes.reserve(filtered[a].size());
          for (const auto& z : filtered[a]) planes.push_back(modulus(z));
          sink(Layer2Path{j1, j2, t2, a, 0}, planes);
        }
      }
    }
  }
}

Layer2Tensor layer2(const Layer1Tensor& u1, const SpatialFilterBank& bank2,
                    const AngularFilterBank& angular, const ScatteringConfig& config) {
  Layer2Tensor out;
  layer2_stream(u1, bank2, angular, config, [&](const Layer2Path& first, std::vector<Plane>& planes) {
    for (int t1 = 0; t1 < static_cast<int>(planes.size()); ++t1) {
      Layer2Path p = first;
      p.theta1 = t1;
      out.paths.push_back(p);
      out.planes.push_back(std::move(planes[t1]));
    }
  });
  return out;
}

Plane pool_average(const Plane& slice, const SpatialFilterBank& bank, int output_stride_log2) {
  const int resolution = slice.scale_log2;
  if (resolution > output_stride_log2)
    throw InternalError("slice stride 2^" + std::to_string(resolution) +
                        " is coarser than the output stride 2^" + std::to_string(output_stride_log2));
  return real_part(conv2d_fft(slice, bank.lowpass(resolution), output_stride_log2 - resolution));
}

Plane pool_max(const Plane& slice, int window_log2, bool overlapping) {
  if (window_log2 < 0) throw ParameterError("pool window must be >= 1 sample");
  const int w = 1 << window_log2;
  if (w > slice.rows() || w > slice.cols())
    throw ParameterError("pool window " + std::to_string(w) + " exceeds slice " +
                         std::to_string(slice.rows()) + "x" + std::to_string(slice.cols()));
  const int step = overlapping ? w / 2 : w;
  if (step < 1) throw ParameterError("overlapping pooling needs a window of at least 2 samples");
  const int out_rows = (slice.rows() - w) / step + 1;
  const int out_cols = (slice.cols() - w) / step + 1;
  Plane out{RealGrid(out_rows, out_cols), slice.scale_log2 + window_log2};
  for (int r = 0; r < out_rows; ++r)
    for (int c = 0; c < out_cols; ++c) {
      double m = slice(r * step, c * step);
      for (int y = r * step; y < r * step + w; ++y)
        for (int x = c * step; x < c * step + w; ++x) m = std::max(m, slice(y, x));
      out(r, c) = m;
    }
  return out;
}

std::vector<PathInfo> path_table(const ScatteringConfig& config) {
  config.validate();
  std::vector<PathInfo> paths;
  const int s0_side = config.image_size >> config.resolved_output_stride_log2();
  const auto [rows, cols] = pooled_shape(config);
  const int angular_filters = static_cast<int>(config.l2_set.size()) + 1;
  std::size_t offset = 0;
  auto add = [&](PathInfo p) {
    p.offset = offset;
    offset += p.size();
    paths.push_back(p);
  };
  for (int ch = 0; ch < config.channels(); ++ch) {
    add(PathInfo{0, ch, -1, -1, -1, -1, -1, s0_side, s0_side, 0});
    for (int j1 : config.resolved_j1_set())
      for (int t1 = 0; t1 < config.K1; ++t1) add(PathInfo{1, ch, j1, t1, -1, -1, -1, rows, cols, 0});
    for (int j1 : config.resolved_j1_set())
      for (int j2 : config.j2_for(j1))
        for (int t2 = 0; t2 < config.K2; ++t2)
          for (int a = 0; a < angular_filters; ++a)
            for (int t1 = 0; t1 < config.K1; ++t1)
              add(PathInfo{2, ch, j1, t1, j2, t2, a, rows, cols, 0});
  }
  return paths;
}

std::size_t count_features(const ScatteringConfig& config) {
  config.validate();
  const auto s0_side = static_cast<std::size_t>(config.image_size >> config.resolved_output_stride_log2());
  const auto [rows, cols] = pooled_shape(config);
  const auto j1 = config.resolved_j1_set();
  const std::size_t first = j1.size() * config.K1;
  std::size_t pairs = 0;
  for (int s : j1) pairs += config.j2_for(s).size();
  const std::size_t second = pairs * config.K2 * (config.l2_set.size() + 1) * config.K1;
  const std::size_t per_channel =
      s0_side * s0_side + (first + second) * static_cast<std::size_t>(rows) * cols;
  return per_channel * config.channels();
}

std::string format_path_table(const std::vector<PathInfo>& paths) {
  std::ostringstream out;
  out << "order channel j1 theta1 j2 theta2 angular rows cols offset\n";
  for (const auto& p : paths)
    out << p.order << ' ' << p.channel << ' ' << p.j1 << ' ' << p.theta1 << ' ' << p.j2 << ' '
        << p.theta2 << ' ' << p.angular << ' ' << p.rows << ' ' << p.cols << ' ' << p.offset << '\n';
  return out.str();
}

std::vector<PathInfo> parse_path_table(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::vector<PathInfo> paths;
  if (!std::getline(in, header)) return paths;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    PathInfo p;
    if (!(fields >> p.order >> p.channel >> p.j1 >> p.theta1 >> p.j2 >> p.theta2 >> p.angular >>
          p.rows >> p.cols >> p.offset))
      throw ParameterError("malformed path table line: " + line);
    paths.push_back(p);
  }
  return paths;
}

ScatteringTransform::ScatteringTransform(ScatteringConfig config)
    : config_(std::move(config)), banks_(build_filter_bank(config_)) {}

Plane ScatteringTransform::pool(const Plane& slice) const {
  switch (config_.pooling) {
    case Pooling::Average:
      return pool_average(slice, banks_.layer1, config_.resolved_output_stride_log2());
    case Pooling::MaxNonOverlap:
      return pool_max(slice, config_.pool_window_log2 - slice.scale_log2, false);
    case Pooling::MaxOverlap:
      return pool_max(slice, config_.pool_window_log2 - slice.scale_log2, true);
  }
  throw InternalError("unknown pooling mode");
}

ScatteringFeatures ScatteringTransform::scatter(const Plane& gray) const {
  return scatter(std::span<const Plane>(&gray, 1));
}

ScatteringFeatures ScatteringTransform::scatter(std::span<const Plane> channels) const {
  if (static_cast<int>(channels.size()) != config_.channels())
    throw ParameterError("expected " + std::to_string(config_.channels()) + " channel(s), got " +
                         std::to_string(channels.size()));
  ScatteringFeatures out;
  out.paths = path_table(config_);
  out.values.reserve(count_features(config_));
  auto append = [&](const Plane& block) {
    out.values.insert(out.values.end(), block.grid.values().begin(), block.grid.values().end());
  };

  for (const Plane& x : channels) {
    check_square(x, config_.image_size);
    append(layer0(x, banks_.layer1, config_.resolved_output_stride_log2()));
    const Layer1Tensor u1 = layer1(x, banks_.layer1, config_);
    for (const Plane& slice : u1.slices) append(pool(slice));
    layer2_stream(u1, banks_.layer2, banks_.angular, config_,
                  [&](const Layer2Path&, std::vector<Plane>& planes) {
                    for (const Plane& p : planes) append(pool(p));
                  });
  }
  if (out.values.size() != count_features(config_))
    throw InternalError("feature assembly produced " + std::to_string(out.values.size()) +
                        " values, expected " + std::to_string(count_features(config_)));
  return out;
}

}  // namespace scatnet
