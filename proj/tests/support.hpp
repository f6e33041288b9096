#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "scatnet/grid.hpp"

namespace scatnet::testing {

inline RealGrid random_real(std::mt19937_64& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealGrid g(rows, cols);
  for (auto& v : g.values()) v = u(rng);
  return g;
}

inline ComplexGrid random_complex(std::mt19937_64& rng, int rows, int cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexGrid g(rows, cols);
  for (auto& v : g.values()) v = {u(rng), u(rng)};
  return g;
}

inline Plane random_plane(std::mt19937_64& rng, int n) { return Plane{random_real(rng, n, n), 0}; }

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <typename A>
double max_abs(const A& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

/// max |a - b| / max |b|
template <typename A, typename B>
double rel_max_err(const A& a, const B& b) {
  const double scale = max_abs(b);
  return max_abs_diff(a, b) / (scale > 0 ? scale : 1.0);
}

template <typename A, typename B>
double l2_dist(const A& a, const B& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

template <typename A>
double l2(const A& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

/// Naive 2D DFT, forward, unnormalized.
inline ComplexGrid naive_dft(const ComplexGrid& x) {
  const int R = x.rows(), C = x.cols();
  ComplexGrid out(R, C);
  for (int kr = 0; kr < R; ++kr)
    for (int kc = 0; kc < C; ++kc) {
      Complex s = 0;
      for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c)
          s += x(r, c) * std::polar(1.0, -2 * M_PI * (double(kr) * r / R + double(kc) * c / C));
      out(kr, kc) = s;
    }
  return out;
}

/// Naive inverse DFT with 1/(R*C).
inline ComplexGrid naive_idft(const ComplexGrid& x) {
  const int R = x.rows(), C = x.cols();
  ComplexGrid out(R, C);
  for (int r = 0; r < R; ++r)
    for (int c = 0; c < C; ++c) {
      Complex s = 0;
      for (int kr = 0; kr < R; ++kr)
        for (int kc = 0; kc < C; ++kc)
          s += x(kr, kc) * std::polar(1.0, 2 * M_PI * (double(kr) * r / R + double(kc) * c / C));
      out(r, c) = s / double(R * C);
    }
  return out;
}

}  // namespace scatnet::testing
