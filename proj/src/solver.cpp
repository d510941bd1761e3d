#include "anomdiss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "anomdiss/fft.hpp"

namespace anomdiss {

using fft::cdouble;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Phase multiplier for shifting a line by delta: mode k picks up
// e^{-2 pi i k delta}. The Nyquist mode is kept real (cosine convention),
// which coincides with the exact translation for node-multiple shifts.
void shift_line_spectral(std::span<cdouble> line, double delta) {
  const int n = static_cast<int>(line.size());
  fft::transform(line, false);
  for (int k = 0; k < n; ++k) {
    if (k == n / 2) {
      line[static_cast<size_t>(k)] *= std::cos(kTwoPi * (n / 2) * delta);
    } else {
      const double freq = k <= n / 2 ? k : k - n;
      const double ang = -kTwoPi * freq * delta;
      line[static_cast<size_t>(k)] *= cdouble(std::cos(ang), std::sin(ang));
    }
  }
  fft::transform(line, true);
}

void check_imag_residue(double max_im, double max_re) {
  if (max_im > 1e-12 * std::max(1.0, max_re))
    throw std::runtime_error("shift_lines: non-negligible imaginary residue");
}

}  // namespace

ScalarField shift_lines(const ScalarField& f, ShearAxis axis, std::span<const double> displacement) {
  const int n = f.n();
  if (displacement.size() != static_cast<size_t>(n))
    throw std::invalid_argument("shift_lines: displacement length must equal N");
  ScalarField out(f.grid());
  std::vector<double> line_im(static_cast<size_t>(n), 0.0);
  std::vector<double> line_re(static_cast<size_t>(n), 0.0);

  if (axis == ShearAxis::horizontal) {
#pragma omp parallel
    {
      std::vector<cdouble> line(static_cast<size_t>(n));
#pragma omp for schedule(static)
      for (int j = 0; j < n; ++j) {
        const double* src = f.row(j);
        for (int i = 0; i < n; ++i) line[static_cast<size_t>(i)] = src[i];
        shift_line_spectral(line, displacement[static_cast<size_t>(j)]);
        double* dst = out.row(j);
        double mi = 0.0, mr = 0.0;
        for (int i = 0; i < n; ++i) {
          dst[i] = line[static_cast<size_t>(i)].real();
          mi = std::max(mi, std::abs(line[static_cast<size_t>(i)].imag()));
          mr = std::max(mr, std::abs(dst[i]));
        }
        line_im[static_cast<size_t>(j)] = mi;
        line_re[static_cast<size_t>(j)] = mr;
      }
    }
  } else {
#pragma omp parallel
    {
      std::vector<cdouble> line(static_cast<size_t>(n));
#pragma omp for schedule(static)
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) line[static_cast<size_t>(j)] = f(i, j);
        shift_line_spectral(line, displacement[static_cast<size_t>(i)]);
        double mi = 0.0, mr = 0.0;
        for (int j = 0; j < n; ++j) {
          out(i, j) = line[static_cast<size_t>(j)].real();
          mi = std::max(mi, std::abs(line[static_cast<size_t>(j)].imag()));
          mr = std::max(mr, std::abs(out(i, j)));
        }
        line_im[static_cast<size_t>(i)] = mi;
        line_re[static_cast<size_t>(i)] = mr;
      }
    }
  }
  double mi = 0.0, mr = 0.0;
  for (int k = 0; k < n; ++k) {
    mi = std::max(mi, line_im[static_cast<size_t>(k)]);
    mr = std::max(mr, line_re[static_cast<size_t>(k)]);
  }
  check_imag_residue(mi, mr);
  return out;
}

ScalarField advect_shear_exact(const ScalarField& f, const ActiveShear& shear, double dt) {
  const int n = f.n();
  if (shear.frequency > n / 2)
    throw std::invalid_argument("advect_shear_exact: profile frequency exceeds grid Nyquist");
  if (dt == 0.0 || shear.amplitude == 0.0) return f;

  std::vector<double> displacement(static_cast<size_t>(n));
  const double h = f.grid().spacing();
  for (int k = 0; k < n; ++k)
    displacement[static_cast<size_t>(k)] =
        dt * shear.amplitude * std::sin(kTwoPi * shear.frequency * (k * h));
  return shift_lines(f, shear.axis, displacement);
}

ScalarField advect_shear_exact(const ScalarField& f, const ShearStage& stage, double dt) {
  return advect_shear_exact(f, ActiveShear{stage.axis, stage.frequency, stage.amplitude}, dt);
}

namespace {

// Forward transform, multiply by exp(-c |2 pi k|^2), inverse transform.
// Shared by diffuse_exact (c = kappa dt) and mollify (c = scale^2 / 2).
ScalarField gaussian_multiplier(const ScalarField& f, double c) {
  const int n = f.n();
  auto spec = fft2(f);
#pragma omp parallel for schedule(static)
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      spec[static_cast<size_t>(ky) * n + kx] *=
          std::exp(-c * kTwoPi * kTwoPi * (fx * fx + fy * fy));
    }
  }
  return ifft2(f.grid(), spec);
}

}  // namespace

ScalarField diffuse_exact(const ScalarField& f, double kappa, double dt) {
  if (kappa < 0.0 || dt < 0.0)
    throw std::invalid_argument("diffuse_exact: kappa and dt must be nonnegative");
  if (kappa * dt == 0.0) return f;
  return gaussian_multiplier(f, kappa * dt);
}

ScalarField mollify(const ScalarField& f, double scale) {
  if (scale < 0.0) throw std::invalid_argument("mollify: scale must be nonnegative");
  if (scale == 0.0) return f;
  return gaussian_multiplier(f, scale * scale / 2.0);
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

namespace {

struct Segment {
  ActiveShear shear;
  double t0 = 0.0;
  double t1 = 0.0;
};

std::vector<Segment> plan_segments(const VelocitySchedule& schedule, double t_end) {
  std::vector<Segment> segs;
  for (const auto& st : schedule.stages)
    segs.push_back({ActiveShear{st.axis, st.frequency, st.amplitude}, st.start, st.start + st.duration});
  const double T = schedule.horizon;
  const double half = schedule.half_time();
  if (t_end > half) {
    if (schedule.mirrored) {
      for (auto it = schedule.stages.rbegin(); it != schedule.stages.rend(); ++it)
        segs.push_back({ActiveShear{it->axis, it->frequency, -it->amplitude},
                        T - (it->start + it->duration), T - it->start});
    } else {
      segs.push_back({ActiveShear{ShearAxis::horizontal, 1, 0.0}, half, T});
    }
  }
  return segs;
}

// mean with a deterministic row-blocked reduction (cheap ledger probe).
double field_mean(const ScalarField& f) { return mean(f); }

// One Strang sub-step D(dt/2) A(dt) D(dt/2); also returns
// kappa*||grad theta||^2 of the result, reusing the final transform.
double strang_substep(ScalarField& theta, const ActiveShear& shear, double kappa, double dt) {
  const int n = theta.n();
  theta = diffuse_exact(theta, kappa, dt / 2.0);
  theta = advect_shear_exact(theta, shear, dt);
  if (kappa == 0.0) {
    return 0.0;
  }
  // Second diffusion half-step fused with the gradient-norm sample.
  auto spec = fft2(theta);
  const double c = kappa * dt / 2.0;
  std::vector<double> partial(static_cast<size_t>(n), 0.0);
  const double norm = 1.0 / (static_cast<double>(n) * n);
#pragma omp parallel for schedule(static)
  for (int ky = 0; ky < n; ++ky) {
    const double fy = signed_frequency(ky, n);
    double s = 0.0;
    for (int kx = 0; kx < n; ++kx) {
      const double fx = signed_frequency(kx, n);
      const double k2 = kTwoPi * kTwoPi * (fx * fx + fy * fy);
      auto& v = spec[static_cast<size_t>(ky) * n + kx];
      v *= std::exp(-c * k2);
      s += k2 * std::norm(v * norm);
    }
    partial[static_cast<size_t>(ky)] = s;
  }
  theta = ifft2(theta.grid(), spec);
  double gsq = 0.0;
  for (int ky = 0; ky < n; ++ky) gsq += partial[static_cast<size_t>(ky)];
  return kappa * gsq;
}

}  // namespace

double Trajectory::dissipation_at(double t) const {
  if (dissipation_series.empty()) throw std::logic_error("Trajectory: empty dissipation series");
  auto it = std::lower_bound(dissipation_series.begin(), dissipation_series.end(), t,
                             [](const auto& p, double v) { return p.first < v; });
  if (it == dissipation_series.end()) return dissipation_series.back().second;
  if (it->first == t || it == dissipation_series.begin()) return it->second;
  const auto& [t1, d1] = *it;
  const auto& [t0, d0] = *(it - 1);
  return d0 + (d1 - d0) * (t - t0) / (t1 - t0);
}

double Trajectory::energy_at(double t) const {
  if (energy_series.empty()) throw std::logic_error("Trajectory: empty energy series");
  auto it = std::lower_bound(energy_series.begin(), energy_series.end(), t,
                             [](const auto& p, double v) { return p.first < v; });
  if (it == energy_series.end()) return energy_series.back().second;
  if (it->first == t || it == energy_series.begin()) return it->second;
  const auto& [t1, e1] = *it;
  const auto& [t0, e0] = *(it - 1);
  return e0 + (e1 - e0) * (t - t0) / (t1 - t0);
}

const ScalarField& Trajectory::snapshot_at(double t) const {
  for (size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-12) return snapshots[i];
  throw std::out_of_range("Trajectory: no snapshot at requested time");
}

Trajectory integrate(const ScalarField& theta0, const VelocitySchedule& schedule,
                     const SolverConfig& cfg) {
  if (!(theta0.grid() == cfg.grid))
    throw std::invalid_argument("integrate: theta0 is not on cfg.grid");
  if (!all_finite(theta0)) throw std::invalid_argument("integrate: theta0 contains non-finite values");
  if (cfg.substeps_per_stage < 1)
    throw std::invalid_argument("solver.substeps_per_stage: must be >= 1");
  if (schedule.max_frequency() > cfg.grid.n / 2)
    throw std::invalid_argument("velocity.lambda/grid.N: schedule frequency exceeds grid Nyquist");
  if (!std::is_sorted(cfg.snapshot_times.begin(), cfg.snapshot_times.end()))
    throw std::invalid_argument("solver.snapshot_times: must be sorted");
  for (double t : cfg.snapshot_times)
    if (t < 0.0 || t > schedule.horizon)
      throw std::invalid_argument("solver.snapshot_times: outside [0, T]");

  const double t_end =
      cfg.snapshot_times.empty() ? schedule.horizon : cfg.snapshot_times.back();

  Trajectory traj;
  traj.kappa = cfg.kappa;
  traj.initial_energy = 0.5 * l2_norm_sq(theta0);
  traj.initial_mean = field_mean(theta0);
  std::tie(traj.initial_min, traj.initial_max) = min_max(theta0);

  ScalarField theta = theta0;
  double t = 0.0;
  double dissipated = 0.0;
  double g_prev = cfg.kappa > 0.0 ? cfg.kappa * grad_norm_sq(theta) : 0.0;

  auto record_series = [&](double time, double g_now) {
    (void)g_now;
    traj.dissipation_series.emplace_back(time, dissipated);
    traj.energy_series.emplace_back(time, 0.5 * l2_norm_sq(theta));
    const auto [lo, hi] = min_max(theta);
    traj.extrema_series.emplace_back(time, lo, hi);
    traj.max_mean_drift =
        std::max(traj.max_mean_drift, std::abs(field_mean(theta) - traj.initial_mean));
  };
  auto maybe_snapshot = [&](double time) {
    for (double st : cfg.snapshot_times) {
      if (st == time || std::abs(st - time) <= 1e-14) {
        traj.times.push_back(st);
        traj.snapshots.push_back(cfg.mollify_scale > 0.0 ? mollify(theta, cfg.mollify_scale)
                                                         : theta);
      }
    }
  };

  record_series(0.0, g_prev);
  maybe_snapshot(0.0);

  for (const Segment& seg : plan_segments(schedule, t_end)) {
    if (seg.t0 >= t_end) break;
    const double seg_end = std::min(seg.t1, t_end);
    // Event times: uniform sub-step boundaries plus snapshot times inside.
    std::vector<double> events;
    const double seg_len = seg.t1 - seg.t0;
    for (int k = 1; k <= cfg.substeps_per_stage; ++k) {
      const double ev = seg.t0 + seg_len * k / cfg.substeps_per_stage;
      if (ev <= seg_end) events.push_back(std::min(ev, seg_end));
    }
    if (events.empty() || events.back() < seg_end) events.push_back(seg_end);
    for (double st : cfg.snapshot_times)
      if (st > seg.t0 && st < seg_end) events.push_back(st);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
                 events.end());

    for (double ev : events) {
      const double dt = ev - t;
      if (dt <= 0.0) continue;
      const double g_now = strang_substep(theta, seg.shear, cfg.kappa, dt);
      dissipated += 0.5 * dt * (g_prev + g_now);
      g_prev = g_now;
      t = ev;
      if (!all_finite(theta))
        throw std::runtime_error("integrate: non-finite field at t = " + std::to_string(t));
      record_series(t, g_now);
      maybe_snapshot(t);
    }
  }
  return traj;
}

LedgerReport ledger_report(const Trajectory& traj) {
  LedgerReport rep;
  rep.mean_drift = traj.max_mean_drift;
  rep.initial_oscillation = traj.initial_max - traj.initial_min;
  const double e0 = traj.initial_energy;
  double worst = 0.0;
  for (size_t i = 0; i < traj.energy_series.size(); ++i) {
    const double e = traj.energy_series[i].second;
    const double d = traj.dissipation_series[i].second;
    worst = std::max(worst, std::abs(e - e0 + d));
  }
  rep.energy_residual_rel = e0 > 0.0 ? worst / e0 : worst;
  double over = 0.0;
  for (const auto& [tt, lo, hi] : traj.extrema_series) {
    (void)tt;
    over = std::max(over, std::max(traj.initial_min - lo, hi - traj.initial_max));
  }
  rep.overshoot = std::max(over, 0.0);
  return rep;
}

}  // namespace anomdiss
