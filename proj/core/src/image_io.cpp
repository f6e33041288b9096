#include "scatnet/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <jpeglib.h>
#include <png.h>

#include "scatnet/error.hpp"

namespace scatnet {
namespace {

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError(path, "cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image from_bytes(int w, int h, int channels, const unsigned char* data) {
  Image img{w, h, channels, std::vector<double>(static_cast<std::size_t>(w) * h * channels)};
  for (std::size_t i = 0; i < img.samples.size(); ++i) img.samples[i] = data[i] / 255.0;
  return img;
}

Image decode_png(const std::string& path, const std::vector<unsigned char>& bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
    throw IngestionError(path, std::string("PNG decode failed: ") + image.message);
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  // Alpha is composited onto black by the simplified API when dropped.
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IngestionError(path, std::string("PNG decode failed: ") + image.message);
  }
  return from_bytes(static_cast<int>(image.width), static_cast<int>(image.height), gray ? 1 : 3,
                    buffer.data());
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

Image decode_jpeg(const std::string& path, const std::vector<unsigned char>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<unsigned char> buffer;
  int w = 0, h = 0, channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw IngestionError(path, std::string("JPEG decode failed: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  w = static_cast<int>(cinfo.output_width);
  h = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  buffer.resize(static_cast<std::size_t>(w) * h * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buffer.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return from_bytes(w, h, channels, buffer.data());
}

Image decode_pnm(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::size_t pos = 2;
  auto next_int = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long v = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) v = v * 10 + (bytes[pos++] - '0');
    if (pos == start || v > (1 << 20)) throw IngestionError(path, "malformed PNM header");
    return static_cast<int>(v);
  };
  const int channels = bytes[1] == '5' ? 1 : 3;
  const int w = next_int();
  const int h = next_int();
  const int maxval = next_int();
  if (w <= 0 || h <= 0 || maxval != 255) throw IngestionError(path, "unsupported PNM (8-bit P5/P6 only)");
  ++pos;  // single whitespace before the raster
  const std::size_t need = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < pos + need) throw IngestionError(path, "truncated PNM raster");
  return from_bytes(w, h, channels, bytes.data() + pos);
}

}  // namespace

Image decode_image(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(path, bytes);
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF)
    return decode_jpeg(path, bytes);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
    return decode_pnm(path, bytes);
  throw IngestionError(path, "unrecognized image format");
}

RealGrid resize_bilinear(const RealGrid& in, int rows, int cols) {
  if (rows <= 0 || cols <= 0 || in.empty()) throw ParameterError("resize to an empty grid");
  RealGrid out(rows, cols);
  const double sy = static_cast<double>(in.rows()) / rows;
  const double sx = static_cast<double>(in.cols()) / cols;
  for (int r = 0; r < rows; ++r) {
    const double y = std::clamp((r + 0.5) * sy - 0.5, 0.0, in.rows() - 1.0);
    const int y0 = static_cast<int>(y);
    const int y1 = std::min(y0 + 1, in.rows() - 1);
    const double fy = y - y0;
    for (int c = 0; c < cols; ++c) {
      const double x = std::clamp((c + 0.5) * sx - 0.5, 0.0, in.cols() - 1.0);
      const int x0 = static_cast<int>(x);
      const int x1 = std::min(x0 + 1, in.cols() - 1);
      const double fx = x - x0;
      out(r, c) = (1 - fy) * ((1 - fx) * in(y0, x0) + fx * in(y0, x1)) +
                  fy * ((1 - fx) * in(y1, x0) + fx * in(y1, x1));
    }
  }
  return out;
}

std::array<double, 3> rgb_to_yuv(double r, double g, double b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return {y, 0.492 * (b - y), 0.877 * (r - y)};
}

RealGrid reflect_pad(const RealGrid& in, int pad) {
  if (pad < 0 || pad > std::min(in.rows(), in.cols()))
    throw ParameterError("reflect padding must be in [0, image side]");
  RealGrid out(in.rows() + 2 * pad, in.cols() + 2 * pad);
  auto mirror = [](int i, int n) { return i < 0 ? -i - 1 : (i >= n ? 2 * n - i - 1 : i); };
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c)
      out(r, c) = in(mirror(r - pad, in.rows()), mirror(c - pad, in.cols()));
  return out;
}

std::vector<Plane> image_to_planes(const Image& image, const ScatteringConfig& config) {
  if (image.width <= 0 || image.height <= 0) throw DataError("empty image");
  const int n_ch = config.channels();
  std::vector<RealGrid> channels(n_ch, RealGrid(image.height, image.width));
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) {
      std::array<double, 3> yuv;
      if (image.channels == 1) {
        yuv = {image.at(y, x, 0), 0.0, 0.0};
      } else {
        yuv = rgb_to_yuv(image.at(y, x, 0), image.at(y, x, 1), image.at(y, x, 2));
      }
      for (int c = 0; c < n_ch; ++c) channels[c](y, x) = yuv[c];
    }
  const int inner = config.image_size - 2 * config.reflect_pad;
  std::vector<Plane> planes;
  for (auto& ch : channels) {
    RealGrid g = resize_bilinear(ch, inner, inner);
    if (config.reflect_pad > 0) g = reflect_pad(g, config.reflect_pad);
    planes.push_back(Plane{std::move(g), 0});
  }
  return planes;
}

std::vector<Plane> load_and_resize(const std::string& path, const ScatteringConfig& config) {
  return image_to_planes(decode_image(path), config);
}

void write_png_gray(const std::string& path, const RealGrid& values) {
  std::vector<unsigned char> buffer(values.size());
  for (std::size_t i = 0; i < buffer.size(); ++i)
    buffer[i] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(values.values()[i], 0.0, 1.0)));
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(values.cols());
  image.height = static_cast<png_uint_32>(values.rows());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw Error("cannot write PNG '" + path + "': " + image.message);
}

}  // namespace scatnet
