#pragma once

#include <complex>
#include <vector>

namespace twistor {

using cplx = std::complex<double>;

// In-place radix-2 FFT, forward sign convention X_k = sum_j x_j e^{-2pi i jk/n}.
// n must be a power of two.
void fft_pow2(std::vector<cplx>& data, bool inverse);

// Discrete Fourier coefficients of samples over a uniform angular grid
// theta_j = 2 pi j / n:  c_k = (1/n) sum_j f_j e^{-i k theta_j},
// returned for k = -k_max .. k_max (index k + k_max). Requires
// k_max <= n/2 - 1 so modes are alias-free for band-limited input.
std::vector<cplx> fourier_modes(const std::vector<cplx>& samples, int k_max);

}  // namespace twistor
