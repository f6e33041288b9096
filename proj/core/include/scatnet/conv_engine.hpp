#pragma once

#include <span>
#include <vector>

#include "scatnet/grid.hpp"

namespace scatnet {

// Periodic convolutions on power-of-two grids. Filters passed to the FFT
// routines live in the frequency domain at the image's own resolution; use
// fold_spectrum to bring a full-resolution filter down to a coarser grid.

/// Sum of aliases: out(k) = sum_a in(k + (R/f) a) with f = 2^factor_log2.
/// This is the spectrum of the spatial filter sampled every f pixels.
template <typename T>
Grid<T> fold_spectrum(const Grid<T>& spectrum, int factor_log2);

/// x * f evaluated on the grid subsampled by 2^subsample_log2, computed by
/// multiplying spectra and folding the product before the inverse transform.
ComplexPlane conv2d_fft(const Plane& image, const ComplexGrid& filter_hat, int subsample_log2);
ComplexPlane conv2d_fft(const Plane& image, const RealGrid& filter_hat, int subsample_log2);
ComplexPlane conv2d_fft(const ComplexPlane& image, const ComplexGrid& filter_hat,
                        int subsample_log2);

/// Same as conv2d_fft but starting from an already transformed image, so one
/// forward transform can serve many filters. `scale_log2` is the image's.
ComplexPlane conv2d_spectrum(const ComplexGrid& image_hat, int scale_log2,
                             const ComplexGrid& filter_hat, int subsample_log2);
ComplexPlane conv2d_spectrum(const ComplexGrid& image_hat, int scale_log2,
                             const RealGrid& filter_hat, int subsample_log2);

/// Brute-force periodic convolution by double summation with a spatial-domain
/// filter. Reference implementation for small grids.
ComplexPlane conv2d_direct(const ComplexPlane& image, const ComplexGrid& filter,
                           int subsample_log2);
ComplexPlane conv2d_direct(const Plane& image, const ComplexGrid& filter, int subsample_log2);

/// Stack of same-shaped planes indexed by orientation.
using AngleStack = std::vector<ComplexPlane>;

/// Circular convolution along the orientation axis, independently at every
/// spatial position: out[k](u) = sum_m in[m](u) filt[(k - m) mod K].
AngleStack circular_conv1d_angle(const AngleStack& stack, std::span<const Complex> filt);

/// Several angular filters at once; the orientation DFT of the stack is
/// computed a single time. Result index follows `filters`.
std::vector<AngleStack> circular_conv1d_angle(const AngleStack& stack,
                                              const std::vector<std::vector<Complex>>& filters);

/// Pointwise complex magnitude.
Plane modulus(const ComplexPlane& p);

/// Pointwise |Re z|; the nonlinearity for real-valued wavelet families.
Plane abs_real(const ComplexPlane& p);

Plane real_part(const ComplexPlane& p);
ComplexPlane to_complex(const Plane& p);

/// Squared l2 norm over all samples.
double squared_norm(const RealGrid& g);
double squared_norm(const ComplexGrid& g);

}  // namespace scatnet
