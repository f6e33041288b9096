#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace scatnet {

using Complex = std::complex<double>;

/// Dense row-major 2D array.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  // Periodic access, any integer index.
  const T& wrapped(int r, int c) const {
    r %= rows_;
    c %= cols_;
    if (r < 0) r += rows_;
    if (c < 0) c += cols_;
    return (*this)(r, c);
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<Complex>;

/// A spatial plane together with how many dyadic subsamplings separate it
/// from the input resolution.
template <typename T>
struct BasicPlane {
  Grid<T> grid;
  int scale_log2 = 0;

  int rows() const { return grid.rows(); }
  int cols() const { return grid.cols(); }
  T& operator()(int r, int c) { return grid(r, c); }
  const T& operator()(int r, int c) const { return grid(r, c); }
};

using Plane = BasicPlane<double>;
using ComplexPlane = BasicPlane<Complex>;

inline Plane make_plane(int rows, int cols, double fill = 0.0) {
  return Plane{RealGrid(rows, cols, fill), 0};
}

/// Rotation by +90 degrees about the origin of the periodic grid:
/// out(y, x) = in(-x mod n, y). Square grids only.
template <typename T>
Grid<T> rotate90(const Grid<T>& in) {
  Grid<T> out(in.rows(), in.cols());
  for (int y = 0; y < in.rows(); ++y)
    for (int x = 0; x < in.cols(); ++x) out(y, x) = in.wrapped(-x, y);
  return out;
}

/// Circular shift: out(y, x) = in(y - dy, x - dx).
template <typename T>
Grid<T> circular_shift(const Grid<T>& in, int dy, int dx) {
  Grid<T> out(in.rows(), in.cols());
  for (int y = 0; y < in.rows(); ++y)
    for (int x = 0; x < in.cols(); ++x) out(y, x) = in.wrapped(y - dy, x - dx);
  return out;
}

}  // namespace scatnet
