#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace anomdiss {

/// Uniform N x N periodic grid on [0,1)^2, nodes at (i*h, j*h) with h = 1/N.
/// N must be a power of two.
struct PeriodicGrid {
  int n = 0;

  static PeriodicGrid make(int n);

  double spacing() const { return 1.0 / n; }
  long size() const { return static_cast<long>(n) * n; }
  double x(int i) const { return i * spacing(); }
  double y(int j) const { return j * spacing(); }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

/// Real scalar samples on a PeriodicGrid, stored row-major: value(ix, iy)
/// lives at values()[iy*N + ix], so a row (fixed y) is contiguous.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(PeriodicGrid g, double fill = 0.0)
      : grid_(g), v_(static_cast<size_t>(g.size()), fill) {}

  static ScalarField sample(PeriodicGrid g, const std::function<double(double, double)>& f);

  const PeriodicGrid& grid() const { return grid_; }
  int n() const { return grid_.n; }

  double operator()(int ix, int iy) const { return v_[idx(ix, iy)]; }
  double& operator()(int ix, int iy) { return v_[idx(ix, iy)]; }

  std::span<const double> values() const { return v_; }
  std::span<double> values() { return v_; }
  const double* row(int iy) const { return v_.data() + static_cast<size_t>(iy) * grid_.n; }
  double* row(int iy) { return v_.data() + static_cast<size_t>(iy) * grid_.n; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }

 private:
  size_t idx(int ix, int iy) const { return static_cast<size_t>(iy) * grid_.n + ix; }

  PeriodicGrid grid_;
  std::vector<double> v_;
};

// ---------------------------------------------------------------------------
// Spectral operators.
//
// Wavenumber convention: index k maps to the signed frequency k for
// k <= N/2 - 1 and k - N for k > N/2; the Nyquist index N/2 is treated as
// underivable (frequency 0) in first derivatives, and |k|^2 is built from
// the same signed frequencies so that laplacian == div(grad) identically
// and the heat multiplier is the exact semigroup of that Laplacian.
// ---------------------------------------------------------------------------

/// Signed frequency for index k on an n-point axis (Nyquist -> 0).
double signed_frequency(int k, int n);

/// Spectral (d/dx f, d/dy f). Exact for band-limited fields below Nyquist.
std::pair<ScalarField, ScalarField> gradient(const ScalarField& f);

/// Spectral Laplacian, identical to composing gradient twice.
ScalarField laplacian(const ScalarField& f);

/// Trapezoid (collocation) quadrature of f^2: h^2 * sum f_ij^2.
double l2_norm_sq(const ScalarField& f);

/// h^2 * sum f_ij; the exact integral for band-limited fields.
double mean(const ScalarField& f);

/// l2_norm_sq of the spectral gradient, evaluated directly in frequency
/// space (one transform instead of two inverse transforms).
double grad_norm_sq(const ScalarField& f);

std::pair<double, double> min_max(const ScalarField& f);
bool all_finite(const ScalarField& f);
double l2_distance(const ScalarField& a, const ScalarField& b);

/// Unnormalized forward 2-D DFT, layout F[ky*N + kx].
std::vector<std::complex<double>> fft2(const ScalarField& f);

/// Inverse of fft2 (includes the 1/N^2 factor). The imaginary residue of
/// the inverse transform must be negligible (< 1e-12 relative); a larger
/// residue indicates a frequency-indexing bug and throws.
ScalarField ifft2(PeriodicGrid g, std::span<const std::complex<double>> spec);

}  // namespace anomdiss
