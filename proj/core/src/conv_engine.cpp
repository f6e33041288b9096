#include "scatnet/conv_engine.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "scatnet/error.hpp"
#include "scatnet/fft.hpp"

namespace scatnet {
namespace {

void check_subsample(int rows, int cols, int subsample_log2) {
  if (subsample_log2 < 0) throw ParameterError("subsample_log2 must be non-negative");
  const int f = 1 << subsample_log2;
  if (rows % f != 0 || cols % f != 0)
    throw ParameterError("grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " is not divisible by subsampling factor " + std::to_string(f));
}

template <typename F>
void check_shapes(const ComplexGrid& image_hat, const Grid<F>& filter_hat) {
  if (image_hat.rows() != filter_hat.rows() || image_hat.cols() != filter_hat.cols())
    throw ParameterError("filter grid " + std::to_string(filter_hat.rows()) + "x" +
                         std::to_string(filter_hat.cols()) + " does not match image grid " +
                         std::to_string(image_hat.rows()) + "x" +
                         std::to_string(image_hat.cols()));
}

// Plain product; std::complex multiplication carries NaN/inf recovery that
// costs a library call per element.
inline Complex times(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
inline Complex times(Complex a, double b) { return {a.real() * b, a.imag() * b}; }

template <typename F>
ComplexPlane multiply_fold_invert(const ComplexGrid& image_hat, int scale_log2,
                                  const Grid<F>& filter_hat, int subsample_log2) {
  check_shapes(image_hat, filter_hat);
  check_subsample(image_hat.rows(), image_hat.cols(), subsample_log2);
  const int f = 1 << subsample_log2;
  const int out_rows = image_hat.rows() / f;
  const int out_cols = image_hat.cols() / f;
  ComplexGrid out(out_rows, out_cols);
  for (int r = 0; r < image_hat.rows(); ++r) {
    const int orow = r % out_rows;
    for (int c = 0; c < image_hat.cols(); ++c)
      out(orow, c % out_cols) += times(image_hat(r, c), filter_hat(r, c));
  }
  if (f > 1) {
    const double scale = 1.0 / (static_cast<double>(f) * f);
    for (auto& v : out.values()) v *= scale;
  }
  fft::inverse(out);
  return ComplexPlane{std::move(out), scale_log2 + subsample_log2};
}

template <typename T>
ComplexPlane direct(const BasicPlane<T>& image, const ComplexGrid& filter, int subsample_log2) {
  if (image.rows() != filter.rows() || image.cols() != filter.cols())
    throw ParameterError("filter grid does not match image grid");
  check_subsample(image.rows(), image.cols(), subsample_log2);
  const int f = 1 << subsample_log2;
  ComplexGrid out(image.rows() / f, image.cols() / f);
  for (int oy = 0; oy < out.rows(); ++oy)
    for (int ox = 0; ox < out.cols(); ++ox) {
      const int uy = oy * f;
      const int ux = ox * f;
      Complex acc{0.0, 0.0};
      for (int vy = 0; vy < image.rows(); ++vy)
        for (int vx = 0; vx < image.cols(); ++vx)
          acc += image(vy, vx) * filter.wrapped(uy - vy, ux - vx);
      out(oy, ox) = acc;
    }
  return ComplexPlane{std::move(out), image.scale_log2 + subsample_log2};
}

}  // namespace

template <typename T>
Grid<T> fold_spectrum(const Grid<T>& spectrum, int factor_log2) {
  check_subsample(spectrum.rows(), spectrum.cols(), factor_log2);
  if (factor_log2 == 0) return spectrum;
  const int f = 1 << factor_log2;
  Grid<T> out(spectrum.rows() / f, spectrum.cols() / f);
  for (int r = 0; r < spectrum.rows(); ++r)
    for (int c = 0; c < spectrum.cols(); ++c)
      out(r % out.rows(), c % out.cols()) += spectrum(r, c);
  return out;
}

template RealGrid fold_spectrum(const RealGrid&, int);
template ComplexGrid fold_spectrum(const ComplexGrid&, int);

ComplexPlane conv2d_spectrum(const ComplexGrid& image_hat, int scale_log2,
                             const ComplexGrid& filter_hat, int subsample_log2) {
  return multiply_fold_invert(image_hat, scale_log2, filter_hat, subsample_log2);
}

ComplexPlane conv2d_spectrum(const ComplexGrid& image_hat, int scale_log2,
                             const RealGrid& filter_hat, int subsample_log2) {
  return multiply_fold_invert(image_hat, scale_log2, filter_hat, subsample_log2);
}

ComplexPlane conv2d_fft(const Plane& image, const ComplexGrid& filter_hat, int subsample_log2) {
  return conv2d_spectrum(fft::forward(image.grid), image.scale_log2, filter_hat, subsample_log2);
}

ComplexPlane conv2d_fft(const Plane& image, const RealGrid& filter_hat, int subsample_log2) {
  return conv2d_spectrum(fft::forward(image.grid), image.scale_log2, filter_hat, subsample_log2);
}

ComplexPlane conv2d_fft(const ComplexPlane& image, const ComplexGrid& filter_hat,
                        int subsample_log2) {
  return conv2d_spectrum(fft::forward_copy(image.grid), image.scale_log2, filter_hat,
                         subsample_log2);
}

ComplexPlane conv2d_direct(const ComplexPlane& image, const ComplexGrid& filter,
                           int subsample_log2) {
  return direct(image, filter, subsample_log2);
}

ComplexPlane conv2d_direct(const Plane& image, const ComplexGrid& filter, int subsample_log2) {
  return direct(image, filter, subsample_log2);
}

std::vector<AngleStack> circular_conv1d_angle(const AngleStack& stack,
                                              const std::vector<std::vector<Complex>>& filters) {
  const int k = static_cast<int>(stack.size());
  if (k == 0) throw ParameterError("empty orientation stack");
  for (const auto& filt : filters)
    if (static_cast<int>(filt.size()) != k)
      throw ParameterError("angular filter length " + std::to_string(filt.size()) +
                           " does not match orientation axis length " + std::to_string(k));
  const int rows = stack.front().rows();
  const int cols = stack.front().cols();
  for (const auto& p : stack)
    if (p.rows() != rows || p.cols() != cols)
      throw ParameterError("orientation stack planes differ in shape");

  // Direct circulant product per position; K is small, and splitting real and
  // imaginary parts keeps the inner loop free of library complex multiplies.
  const auto kk = static_cast<std::size_t>(k);
  const std::size_t nf = filters.size();
  std::vector<double> hr(nf * kk * kk), hi(nf * kk * kk);
  for (std::size_t f = 0; f < nf; ++f)
    for (int n = 0; n < k; ++n)
      for (int m = 0; m < k; ++m) {
        const Complex h = filters[f][((n - m) % k + k) % k];
        hr[(f * kk + n) * kk + m] = h.real();
        hi[(f * kk + n) * kk + m] = h.imag();
      }

  std::vector<AngleStack> out(
      nf, AngleStack(kk, ComplexPlane{ComplexGrid(rows, cols), stack.front().scale_log2}));
  std::vector<double> xr(kk), xi(kk);
  const std::size_t cells = static_cast<std::size_t>(rows) * cols;
  for (std::size_t i = 0; i < cells; ++i) {
    for (std::size_t m = 0; m < kk; ++m) {
      xr[m] = stack[m].grid.data()[i].real();
      xi[m] = stack[m].grid.data()[i].imag();
    }
    for (std::size_t f = 0; f < nf; ++f)
      for (std::size_t n = 0; n < kk; ++n) {
        const double* a = &hr[(f * kk + n) * kk];
        const double* b = &hi[(f * kk + n) * kk];
        double re = 0.0, im = 0.0;
        for (std::size_t m = 0; m < kk; ++m) {
          re += xr[m] * a[m] - xi[m] * b[m];
          im += xr[m] * b[m] + xi[m] * a[m];
        }
        out[f][n].grid.data()[i] = Complex(re, im);
      }
  }
  return out;
}

AngleStack circular_conv1d_angle(const AngleStack& stack, std::span<const Complex> filt) {
  std::vector<std::vector<Complex>> one{std::vector<Complex>(filt.begin(), filt.end())};
  return std::move(circular_conv1d_angle(stack, one).front());
}

Plane modulus(const ComplexPlane& p) {
  Plane out{RealGrid(p.rows(), p.cols()), p.scale_log2};
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const Complex z = p.grid.data()[i];
    out.grid.data()[i] = std::sqrt(z.real() * z.real() + z.imag() * z.imag());
  }
  return out;
}

Plane abs_real(const ComplexPlane& p) {
  Plane out{RealGrid(p.rows(), p.cols()), p.scale_log2};
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    out.grid.data()[i] = std::abs(p.grid.data()[i].real());
  return out;
}

Plane real_part(const ComplexPlane& p) {
  Plane out{RealGrid(p.rows(), p.cols()), p.scale_log2};
  for (std::size_t i = 0; i < p.grid.size(); ++i) out.grid.data()[i] = p.grid.data()[i].real();
  return out;
}

ComplexPlane to_complex(const Plane& p) {
  ComplexPlane out{ComplexGrid(p.rows(), p.cols()), p.scale_log2};
  for (std::size_t i = 0; i < p.grid.size(); ++i) out.grid.data()[i] = p.grid.data()[i];
  return out;
}

double squared_norm(const RealGrid& g) {
  double s = 0.0;
  for (double v : g.values()) s += v * v;
  return s;
}

double squared_norm(const ComplexGrid& g) {
  double s = 0.0;
  for (const Complex& v : g.values()) s += std::norm(v);
  return s;
}

}  // namespace scatnet
