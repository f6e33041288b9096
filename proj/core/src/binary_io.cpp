#include "scatnet/binary_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include "scatnet/error.hpp"

namespace scatnet::binary {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

}  // namespace

void Writer::raw(const void* data, std::size_t n) {
  out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out_) throw Error("write failed");
}

void Writer::magic(std::string_view four_bytes) { raw(four_bytes.data(), four_bytes.size()); }
void Writer::u8(std::uint8_t v) { raw(&v, 1); }
void Writer::u32(std::uint32_t v) {
  v = to_little(v);
  raw(&v, sizeof v);
}
void Writer::u64(std::uint64_t v) {
  v = to_little(v);
  raw(&v, sizeof v);
}
void Writer::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
void Writer::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
void Writer::bytes(std::string_view data) { raw(data.data(), data.size()); }
void Writer::finish() {
  out_.flush();
  if (!out_) throw Error("write failed");
}

void Reader::raw(void* data, std::size_t n, const char* what) {
  in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got != n)
    throw FormatError(std::string("truncated file while reading ") + what, offset_ + got);
  offset_ += n;
}

void Reader::expect_magic(std::string_view four_bytes) {
  const auto start = offset_;
  const std::string got = bytes(four_bytes.size(), "magic");
  if (got != four_bytes)
    throw FormatError("bad magic: expected '" + std::string(four_bytes) + "'", start);
}

std::uint8_t Reader::u8(const char* what) {
  std::uint8_t v = 0;
  raw(&v, 1, what);
  return v;
}
std::uint32_t Reader::u32(const char* what) {
  std::uint32_t v = 0;
  raw(&v, sizeof v, what);
  return to_little(v);
}
std::uint64_t Reader::u64(const char* what) {
  std::uint64_t v = 0;
  raw(&v, sizeof v, what);
  return to_little(v);
}
float Reader::f32(const char* what) { return std::bit_cast<float>(u32(what)); }
double Reader::f64(const char* what) { return std::bit_cast<double>(u64(what)); }

std::string Reader::bytes(std::size_t n, const char* what) {
  // Chunked so a corrupt length fails on truncation instead of allocating it.
  constexpr std::size_t kChunk = 1 << 20;
  std::string s;
  while (s.size() < n) {
    const std::size_t take = std::min(kChunk, n - s.size());
    const std::size_t at = s.size();
    s.resize(at + take);
    raw(s.data() + at, take, what);
  }
  return s;
}

void Reader::expect_end() {
  if (in_.peek() != std::char_traits<char>::eof())
    throw FormatError("trailing bytes after end of record", offset_);
}

}  // namespace scatnet::binary
