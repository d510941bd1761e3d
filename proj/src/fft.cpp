#include "anomdiss/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace anomdiss::fft {

namespace {

// Forward twiddles e^{-2*pi*i*k/n}, k < n/2. Built once per length.
const std::vector<cdouble>& twiddles_for(int n) {
  static std::mutex mtx;
  static std::map<int, std::vector<cdouble>> cache;
  std::scoped_lock lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<cdouble> w(static_cast<size_t>(n / 2));
    for (int k = 0; k < n / 2; ++k) {
      const double ang = -2.0 * std::numbers::pi * k / n;
      w[static_cast<size_t>(k)] = {std::cos(ang), std::sin(ang)};
    }
    it = cache.emplace(n, std::move(w)).first;
  }
  return it->second;
}

}  // namespace

void transform(std::span<cdouble> data, bool inverse) {
  const int n = static_cast<int>(data.size());
  if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[static_cast<size_t>(i)], data[static_cast<size_t>(j)]);
  }

  const auto& w = twiddles_for(n);
  for (int len = 2; len <= n; len <<= 1) {
    const int stride = n / len;
    for (int i = 0; i < n; i += len) {
      for (int j = 0; j < len / 2; ++j) {
        cdouble tw = w[static_cast<size_t>(j * stride)];
        if (inverse) tw = std::conj(tw);
        cdouble& a = data[static_cast<size_t>(i + j)];
        cdouble& b = data[static_cast<size_t>(i + j + len / 2)];
        const cdouble t = b * tw;
        b = a - t;
        a += t;
      }
    }
  }

  if (inverse) {
    // n is a power of two, so this scaling is exact.
    const double inv = 1.0 / n;
    for (auto& z : data) z *= inv;
  }
}

}  // namespace anomdiss::fft
