#include "twistor/fft.hpp"

#include <cmath>

#include "twistor/errors.hpp"

namespace twistor {

void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  require(n > 0 && (n & (n - 1)) == 0, "fft_pow2: size must be a power of two");
  // bit reversal
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

std::vector<cplx> fourier_modes(const std::vector<cplx>& samples, int k_max) {
  const int n = static_cast<int>(samples.size());
  require(k_max >= 0 && k_max <= n / 2 - 1, "fourier_modes: k_max <= n/2 - 1");
  std::vector<cplx> out(2 * k_max + 1);
  if ((n & (n - 1)) == 0) {
    std::vector<cplx> work = samples;
    fft_pow2(work, false);
    for (int k = -k_max; k <= k_max; ++k) {
      const int idx = (k >= 0) ? k : n + k;
      out[k + k_max] = work[idx] / static_cast<double>(n);
    }
  } else {
    // direct sums; only used for odd test grids
    for (int k = -k_max; k <= k_max; ++k) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const double ang = -2.0 * M_PI * k * j / n;
        acc += samples[j] * cplx(std::cos(ang), std::sin(ang));
      }
      out[k + k_max] = acc / static_cast<double>(n);
    }
  }
  return out;
}

}  // namespace twistor
