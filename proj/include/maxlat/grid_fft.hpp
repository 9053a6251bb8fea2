#pragma once

#include <complex>
#include <vector>

namespace maxlat {

/// In-place unnormalized 3-D DFT of an N^3 array in row-major (i1, i2, i3)
/// order. forward: X_k = sum_j x_j e^{-2 pi i j.k / N}; backward uses +i.
void fft3_forward(std::vector<std::complex<double>>& data, int n);
void fft3_backward(std::vector<std::complex<double>>& data, int n);

}  // namespace maxlat
