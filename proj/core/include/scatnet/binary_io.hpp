#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace scatnet::binary {

// Little-endian primitives for the SCF1/SCM1/SCS1 formats. The reader keeps
// a running byte offset so decoding failures can report where they happened.

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void magic(std::string_view four_bytes);
  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void bytes(std::string_view data);
  void finish();

 private:
  void raw(const void* data, std::size_t n);
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Throws FormatError if the next four bytes differ from `four_bytes`.
  void expect_magic(std::string_view four_bytes);
  std::uint8_t u8(const char* what);
  std::uint32_t u32(const char* what);
  std::uint64_t u64(const char* what);
  float f32(const char* what);
  double f64(const char* what);
  std::string bytes(std::size_t n, const char* what);
  /// Throws FormatError if any byte remains.
  void expect_end();
  std::uint64_t offset() const { return offset_; }

 private:
  void raw(void* data, std::size_t n, const char* what);
  std::istream& in_;
  std::uint64_t offset_ = 0;
};

}  // namespace scatnet::binary
