#pragma once

#include <array>
#include <string>
#include <vector>

#include "scatnet/config.hpp"
#include "scatnet/grid.hpp"

namespace scatnet {

/// Decoded image with samples in [0,1], interleaved, 1 (gray) or 3 (RGB) channels.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> samples;

  double at(int y, int x, int c) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

/// PNG, JPEG and binary PNM (P5/P6). Throws IngestionError on failure.
Image decode_image(const std::string& path);

/// Bilinear resampling with pixel-center alignment and clamped edges.
RealGrid resize_bilinear(const RealGrid& in, int rows, int cols);

/// BT.601 full range: Y = .299R + .587G + .114B, U = .492(B - Y), V = .877(R - Y).
std::array<double, 3> rgb_to_yuv(double r, double g, double b);

/// Mirror a grid outward by pad pixels on each side (edge sample repeated once).
RealGrid reflect_pad(const RealGrid& in, int pad);

/// Channel planes ready for scattering: one (Y) for gray, three (Y, U, V) for YUV.
std::vector<Plane> image_to_planes(const Image& image, const ScatteringConfig& config);
std::vector<Plane> load_and_resize(const std::string& path, const ScatteringConfig& config);

/// 8-bit grayscale PNG; values are clamped to [0,1].
void write_png_gray(const std::string& path, const RealGrid& values);

}  // namespace scatnet
