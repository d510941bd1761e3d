#pragma once

#include <complex>
#include <span>

namespace anomdiss::fft {

using cdouble = std::complex<double>;

constexpr bool is_pow2(long n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 FFT. Forward: X[k] = sum_n x[n] e^{-2*pi*i*k*n/N}.
/// The inverse applies the 1/N factor. Length must be a power of two.
/// Twiddle tables are cached per length and immutable once built, so
/// concurrent transforms of independent buffers are safe.
void transform(std::span<cdouble> data, bool inverse);

}  // namespace anomdiss::fft
