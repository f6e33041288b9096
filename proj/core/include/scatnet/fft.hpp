#pragma once

#include "scatnet/grid.hpp"

namespace scatnet::fft {

// Transform convention used throughout the library:
//   forward  X(k) = sum_n x(n) exp(-2 pi i k.n / N)       (unnormalized)
//   inverse  x(n) = 1/(R*C) sum_k X(k) exp(+2 pi i k.n / N)
// so that ||x||^2 = ||X||^2 / (R*C).
//
// Backed by FFTW. Plans are created once per shape under a lock and are
// executed with the thread-safe new-array interface, so transforms may run
// concurrently on distinct grids. Plans are made with FFTW_ESTIMATE |
// FFTW_UNALIGNED, which makes the arithmetic independent of buffer
// alignment and therefore reproducible bit for bit.

void forward(ComplexGrid& grid);
void inverse(ComplexGrid& grid);

ComplexGrid forward(const RealGrid& grid);
ComplexGrid forward_copy(const ComplexGrid& grid);

}  // namespace scatnet::fft
