#include "anomdiss/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "anomdiss/fft.hpp"

namespace anomdiss {

using fft::cdouble;

PeriodicGrid PeriodicGrid::make(int n) {
  if (n < 4 || !fft::is_pow2(n))
    throw std::invalid_argument("PeriodicGrid: N must be a power of two >= 4");
  return PeriodicGrid{n};
}

ScalarField ScalarField::sample(PeriodicGrid g, const std::function<double(double, double)>& f) {
  ScalarField out(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    double* r = out.row(j);
    const double y = g.y(j);
    for (int i = 0; i < n; ++i) r[i] = f(g.x(i), y);
  }
  return out;
}

namespace {

void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("ScalarField: operands live on different grids");
}

// Deterministic reduction: per-row partials (each row summed serially,
// rows computed in parallel), combined in fixed row order. The result is
// independent of the thread count.
template <typename RowSum>
double row_blocked_sum(int n, RowSum&& row_sum) {
  std::vector<double> partial(static_cast<size_t>(n));
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) partial[static_cast<size_t>(j)] = row_sum(j);
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += partial[static_cast<size_t>(j)];
  return total;
}

}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same_grid(*this, o);
  for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same_grid(*this, o);
  for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : v_) v *= s;
  return *this;
}

double signed_frequency(int k, int n) {
  if (k == n / 2) return 0.0;  // Nyquist treated as underivable
  return k <= n / 2 ? k : k - n;
}

std::vector<cdouble> fft2(const ScalarField& f) {
  const int n = f.n();
  std::vector<cdouble> spec(static_cast<size_t>(f.grid().size()));
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const double* r = f.row(j);
    cdouble* out = spec.data() + static_cast<size_t>(j) * n;
    for (int i = 0; i < n; ++i) out[i] = r[i];
    fft::transform({out, static_cast<size_t>(n)}, false);
  }
#pragma omp parallel
  {
    std::vector<cdouble> col(static_cast<size_t>(n));
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) col[static_cast<size_t>(j)] = spec[static_cast<size_t>(j) * n + i];
      fft::transform(col, false);
      for (int j = 0; j < n; ++j) spec[static_cast<size_t>(j) * n + i] = col[static_cast<size_t>(j)];
    }
  }
  return spec;
}

ScalarField ifft2(PeriodicGrid g, std::span<const cdouble> spec) {
  const int n = g.n;
  if (spec.size() != static_cast<size_t>(g.size()))
    throw std::invalid_argument("ifft2: spectrum size does not match grid");
  std::vector<cdouble> work(spec.begin(), spec.end());
#pragma omp parallel
  {
    std::vector<cdouble> col(static_cast<size_t>(n));
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) col[static_cast<size_t>(j)] = work[static_cast<size_t>(j) * n + i];
      fft::transform(col, true);
      for (int j = 0; j < n; ++j) work[static_cast<size_t>(j) * n + i] = col[static_cast<size_t>(j)];
    }
  }
  ScalarField out(g);
  std::vector<double> max_im(static_cast<size_t>(n), 0.0);
  std::vector<double> max_re(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    cdouble* r = work.data() + static_cast<size_t>(j) * n;
    fft::transform({r, static_cast<size_t>(n)}, true);
    double* o = out.row(j);
    double mi = 0.0, mr = 0.0;
    for (int i = 0; i < n; ++i) {
      o[i] = r[i].real();
      mi = std::max(mi, std::abs(r[i].imag()));
      mr = std::max(mr, std::abs(r[i].real()));
    }
    max_im[static_cast<size_t>(j)] = mi;
    max_re[static_cast<size_t>(j)] = mr;
  }
  double mi = 0.0, mr = 0.0;
  for (int j = 0; j < n; ++j) {
    mi = std::max(mi, max_im[static_cast<size_t>(j)]);
    mr = std::max(mr, max_re[static_cast<size_t>(j)]);
  }
  if (mi > 1e-12 * std::max(1.0, mr))
    throw std::runtime_error("ifft2: non-negligible imaginary residue (frequency indexing bug?)");
  return out;
}

std::pair<ScalarField, ScalarField> gradient(const ScalarField& f) {
  const int n = f.n();
  const auto spec = fft2(f);
  std::vector<cdouble> sx(spec.size()), sy(spec.size());
  const double two_pi = 2.0 * std::numbers::pi;
#pragma omp parallel for schedule(static)
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      const cdouble v = spec[static_cast<size_t>(ky) * n + kx];
      sx[static_cast<size_t>(ky) * n + kx] = cdouble(0.0, two_pi * fx) * v;
      sy[static_cast<size_t>(ky) * n + kx] = cdouble(0.0, two_pi * fy) * v;
    }
  }
  return {ifft2(f.grid(), sx), ifft2(f.grid(), sy)};
}

ScalarField laplacian(const ScalarField& f) {
  const int n = f.n();
  auto spec = fft2(f);
  const double two_pi = 2.0 * std::numbers::pi;
#pragma omp parallel for schedule(static)
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      spec[static_cast<size_t>(ky) * n + kx] *= -(two_pi * two_pi) * (fx * fx + fy * fy);
    }
  }
  return ifft2(f.grid(), spec);
}

double l2_norm_sq(const ScalarField& f) {
  const int n = f.n();
  const double h2 = f.grid().spacing() * f.grid().spacing();
  return h2 * row_blocked_sum(n, [&](int j) {
           const double* r = f.row(j);
           double s = 0.0;
           for (int i = 0; i < n; ++i) s += r[i] * r[i];
           return s;
         });
}

double mean(const ScalarField& f) {
  const int n = f.n();
  const double h2 = f.grid().spacing() * f.grid().spacing();
  return h2 * row_blocked_sum(n, [&](int j) {
           const double* r = f.row(j);
           double s = 0.0;
           for (int i = 0; i < n; ++i) s += r[i];
           return s;
         });
}

double grad_norm_sq(const ScalarField& f) {
  const int n = f.n();
  const auto spec = fft2(f);
  const double two_pi = 2.0 * std::numbers::pi;
  // Parseval: ||grad f||^2 = sum_k (2 pi |k|)^2 |F_k / N^2|^2.
  const double norm = 1.0 / (static_cast<double>(n) * n);
  return row_blocked_sum(n, [&](int ky) {
    const double fy = signed_frequency(ky, n);
    double s = 0.0;
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      const cdouble v = spec[static_cast<size_t>(ky) * n + kx] * norm;
      s += (two_pi * two_pi) * (fx * fx + fy * fy) * std::norm(v);
    }
    return s;
  });
}

std::pair<double, double> min_max(const ScalarField& f) {
  const int n = f.n();
  double lo = f.values()[0], hi = f.values()[0];
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
  for (int j = 0; j < n; ++j) {
    const double* r = f.row(j);
    for (int i = 0; i < n; ++i) {
      lo = std::min(lo, r[i]);
      hi = std::max(hi, r[i]);
    }
  }
  return {lo, hi};
}

bool all_finite(const ScalarField& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

double l2_distance(const ScalarField& a, const ScalarField& b) {
  check_same_grid(a, b);
  const int n = a.n();
  const double h2 = a.grid().spacing() * a.grid().spacing();
  const double s = row_blocked_sum(n, [&](int j) {
    const double* ra = a.row(j);
    const double* rb = b.row(j);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = ra[i] - rb[i];
      acc += d * d;
    }
    return acc;
  });
  return std::sqrt(h2 * s);
}

}  // namespace anomdiss
