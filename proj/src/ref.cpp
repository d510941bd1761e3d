#include "anomdiss/ref.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace anomdiss::ref {

namespace {

using cdouble = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direct O(n^2) DFT, same conventions as the fast path.
std::vector<cdouble> naive_dft(std::span<const cdouble> x, bool inverse) {
  const int n = static_cast<int>(x.size());
  std::vector<cdouble> out(static_cast<size_t>(n));
  const double sgn = inverse ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    cdouble acc = 0.0;
    for (int m = 0; m < n; ++m) {
      const double ang = sgn * kTwoPi * k * m / n;
      acc += x[static_cast<size_t>(m)] * cdouble(std::cos(ang), std::sin(ang));
    }
    out[static_cast<size_t>(k)] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

std::vector<cdouble> to_complex(const ScalarField& f) {
  std::vector<cdouble> v(f.values().begin(), f.values().end());
  return v;
}

std::vector<cdouble> dft2(const ScalarField& f) {
  const int n = f.n();
  auto work = to_complex(f);
  for (int j = 0; j < n; ++j) {
    std::span<const cdouble> row(work.data() + static_cast<size_t>(j) * n, static_cast<size_t>(n));
    auto t = naive_dft(row, false);
    for (int i = 0; i < n; ++i) work[static_cast<size_t>(j) * n + i] = t[static_cast<size_t>(i)];
  }
  std::vector<cdouble> col(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[static_cast<size_t>(j)] = work[static_cast<size_t>(j) * n + i];
    auto t = naive_dft(col, false);
    for (int j = 0; j < n; ++j) work[static_cast<size_t>(j) * n + i] = t[static_cast<size_t>(j)];
  }
  return work;
}

ScalarField idft2(PeriodicGrid g, std::vector<cdouble> work) {
  const int n = g.n;
  std::vector<cdouble> col(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[static_cast<size_t>(j)] = work[static_cast<size_t>(j) * n + i];
    auto t = naive_dft(col, true);
    for (int j = 0; j < n; ++j) work[static_cast<size_t>(j) * n + i] = t[static_cast<size_t>(j)];
  }
  ScalarField out(g);
  for (int j = 0; j < n; ++j) {
    std::span<const cdouble> row(work.data() + static_cast<size_t>(j) * n, static_cast<size_t>(n));
    auto t = naive_dft(row, true);
    for (int i = 0; i < n; ++i) out(i, j) = t[static_cast<size_t>(i)].real();
  }
  return out;
}

}  // namespace

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const int n = f.n();
  auto spec = dft2(f);
  std::vector<cdouble> sx(spec.size()), sy(spec.size());
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      const cdouble v = spec[static_cast<size_t>(ky) * n + kx];
      sx[static_cast<size_t>(ky) * n + kx] = cdouble(0.0, kTwoPi * fx) * v;
      sy[static_cast<size_t>(ky) * n + kx] = cdouble(0.0, kTwoPi * fy) * v;
    }
  }
  return {idft2(f.grid(), std::move(sx)), idft2(f.grid(), std::move(sy))};
}

ScalarField laplacian(const ScalarField& f) {
  const int n = f.n();
  auto spec = dft2(f);
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      spec[static_cast<size_t>(ky) * n + kx] *= -(kTwoPi * kTwoPi) * (fx * fx + fy * fy);
    }
  }
  return idft2(f.grid(), std::move(spec));
}

double l2_norm_sq(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v * v;
  return s * f.grid().spacing() * f.grid().spacing();
}

double mean(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s * f.grid().spacing() * f.grid().spacing();
}

double grad_norm_sq(const ScalarField& f) {
  const int n = f.n();
  const auto spec = dft2(f);
  const double norm = 1.0 / (static_cast<double>(n) * n);
  double s = 0.0;
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      const cdouble v = spec[static_cast<size_t>(ky) * n + kx] * norm;
      s += kTwoPi * kTwoPi * (fx * fx + fy * fy) * std::norm(v);
    }
  }
  return s;
}

ScalarField shift_lines(const ScalarField& f, ShearAxis axis, std::span<const double> displacement) {
  const int n = f.n();
  if (displacement.size() != static_cast<size_t>(n))
    throw std::invalid_argument("ref::shift_lines: displacement length must equal N");
  ScalarField out(f.grid());
  std::vector<cdouble> line(static_cast<size_t>(n));
  for (int l = 0; l < n; ++l) {
    if (axis == ShearAxis::horizontal) {
      const double* src = f.row(l);
      for (int i = 0; i < n; ++i) line[static_cast<size_t>(i)] = src[i];
    } else {
      for (int j = 0; j < n; ++j) line[static_cast<size_t>(j)] = f(l, j);
    }
    auto spec = naive_dft(line, false);
    const double delta = displacement[static_cast<size_t>(l)];
    for (int k = 0; k < n; ++k) {
      if (k == n / 2) {
        spec[static_cast<size_t>(k)] *= std::cos(kTwoPi * (n / 2) * delta);
      } else {
        const double freq = k <= n / 2 ? k : k - n;
        const double ang = -kTwoPi * freq * delta;
        spec[static_cast<size_t>(k)] *= cdouble(std::cos(ang), std::sin(ang));
      }
    }
    auto back = naive_dft(spec, true);
    if (axis == ShearAxis::horizontal) {
      double* dst = out.row(l);
      for (int i = 0; i < n; ++i) dst[i] = back[static_cast<size_t>(i)].real();
    } else {
      for (int j = 0; j < n; ++j) out(l, j) = back[static_cast<size_t>(j)].real();
    }
  }
  return out;
}

ScalarField advect_shear_exact(const ScalarField& f, const ShearStage& stage, double dt) {
  const int n = f.n();
  if (stage.frequency > n / 2)
    throw std::invalid_argument("ref::advect_shear_exact: frequency exceeds grid Nyquist");
  std::vector<double> displacement(static_cast<size_t>(n));
  const double h = f.grid().spacing();
  for (int k = 0; k < n; ++k) displacement[static_cast<size_t>(k)] = dt * stage.profile(k * h);
  return shift_lines(f, stage.axis, displacement);
}

ScalarField diffuse_exact(const ScalarField& f, double kappa, double dt) {
  if (kappa * dt == 0.0) return f;
  const int n = f.n();
  auto spec = dft2(f);
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      spec[static_cast<size_t>(ky) * n + kx] *=
          std::exp(-kappa * dt * kTwoPi * kTwoPi * (fx * fx + fy * fy));
    }
  }
  return idft2(f.grid(), std::move(spec));
}

}  // namespace anomdiss::ref
