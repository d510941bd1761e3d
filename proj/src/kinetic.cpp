#include "anomdiss/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anomdiss {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double chi(double theta_value, double xi) { return xi <= theta_value ? 1.0 : 0.0; }

int XiGrid::cells() const {
  if (!(xi_max > xi_min) || !(d_xi > 0.0))
    throw std::invalid_argument("XiGrid: require xi_min < xi_max and d_xi > 0");
  const int m = static_cast<int>(std::llround((xi_max - xi_min) / d_xi));
  if (m < 1) throw std::invalid_argument("XiGrid: fewer than one cell");
  return m;
}

// ---------------------------------------------------------------------------
// XiTestFunction
// ---------------------------------------------------------------------------

XiTestFunction::XiTestFunction(std::vector<double> breakpoints, std::vector<double> values)
    : breaks_(std::move(breakpoints)), c_(std::move(values)) {
  if (breaks_.size() < 2 || c_.size() + 1 != breaks_.size())
    throw std::invalid_argument("XiTestFunction: need m+1 breakpoints for m segment values");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()) ||
      std::adjacent_find(breaks_.begin(), breaks_.end()) != breaks_.end())
    throw std::invalid_argument("XiTestFunction: breakpoints must be strictly increasing");

  const size_t m = c_.size();
  f_.assign(m + 1, 0.0);
  g_.assign(m + 1, 0.0);
  gg_.assign(m + 1, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const double d = breaks_[i + 1] - breaks_[i];
    f_[i + 1] = f_[i] + c_[i] * d;
    g_[i + 1] = g_[i] + f_[i] * d + c_[i] * d * d / 2.0;
    gg_[i + 1] = gg_[i] + g_[i] * d + f_[i] * d * d / 2.0 + c_[i] * d * d * d / 6.0;
  }
}

XiTestFunction XiTestFunction::paper(double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5))
    throw std::invalid_argument("epsilon: must lie in (0, 1/2) so that -1 + 1/epsilon > 1");
  const double r = 1.0 / epsilon;
  XiTestFunction tf({-3.0 - r, -3.0, -1.0, -1.0 + r}, {-epsilon, 1.0, -epsilon});
  tf.epsilon_ = epsilon;
  return tf;
}

double XiTestFunction::second_derivative(double xi) const {
  if (xi < breaks_.front() || xi >= breaks_.back()) return 0.0;
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), xi);
  return c_[static_cast<size_t>(it - breaks_.begin()) - 1];
}

double XiTestFunction::first_derivative(double xi) const {
  if (xi < breaks_.front()) return 0.0;
  if (xi >= breaks_.back()) return f_.back();
  const size_t i = static_cast<size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), xi) -
                                       breaks_.begin()) - 1;
  return f_[i] + c_[i] * (xi - breaks_[i]);
}

double XiTestFunction::value(double xi) const {
  if (xi < breaks_.front()) return 0.0;
  if (xi >= breaks_.back()) return g_.back() + f_.back() * (xi - breaks_.back());
  const size_t i = static_cast<size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), xi) -
                                       breaks_.begin()) - 1;
  const double d = xi - breaks_[i];
  return g_[i] + f_[i] * d + c_[i] * d * d / 2.0;
}

double XiTestFunction::integral_to(double xi) const {
  if (xi < breaks_.front()) return 0.0;
  if (xi >= breaks_.back()) {
    const double d = xi - breaks_.back();
    return gg_.back() + g_.back() * d + f_.back() * d * d / 2.0;
  }
  const size_t i = static_cast<size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), xi) -
                                       breaks_.begin()) - 1;
  const double d = xi - breaks_[i];
  return gg_[i] + g_[i] * d + f_[i] * d * d / 2.0 + c_[i] * d * d * d / 6.0;
}

double XiTestFunction::max_abs_second() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// PolyBump: scale * (1 - s^2)^3 on |s| < 1.
// ---------------------------------------------------------------------------

PolyBump::PolyBump(double center, double radius, double scale)
    : center_(center), radius_(radius), scale_(scale) {
  if (!(radius > 0.0)) throw std::invalid_argument("PolyBump: radius must be positive");
}

double PolyBump::value(double xi) const {
  const double s = (xi - center_) / radius_;
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return scale_ * u * u * u;
}

double PolyBump::first_derivative(double xi) const {
  const double s = (xi - center_) / radius_;
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return scale_ * (-6.0) * s * u * u / radius_;
}

double PolyBump::second_derivative(double xi) const {
  const double s = (xi - center_) / radius_;
  if (std::abs(s) >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return scale_ * (-6.0 * u * u + 24.0 * s * s * u) / (radius_ * radius_);
}

double PolyBump::integral_to(double xi) const {
  const double s = (xi - center_) / radius_;
  auto antideriv = [](double t) {
    return t - t * t * t + 0.6 * std::pow(t, 5) - std::pow(t, 7) / 7.0;
  };
  const double lo = antideriv(-1.0);
  if (s <= -1.0) return 0.0;
  const double at = s >= 1.0 ? antideriv(1.0) : antideriv(s);
  return scale_ * radius_ * (at - lo);
}

// ---------------------------------------------------------------------------
// TimeCutoff
// ---------------------------------------------------------------------------

TimeCutoff::TimeCutoff(double tau_, double width_, double horizon_)
    : tau(tau_), width(width_), horizon(horizon_) {
  if (!(width > 0.0) || !(tau - width >= 0.0) || !(tau <= horizon))
    throw std::invalid_argument("kinetic.tau/kinetic.cutoff_width: require 0 <= tau-width and tau <= T");
}

namespace {

// C-infinity step: 0 at u<=0, 1 at u>=1.
double smoothstep(double u) {
  if (u <= 1e-6) return 0.0;
  if (u >= 1.0 - 1e-6) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double smoothstep_derivative(double u) {
  if (u <= 1e-6 || u >= 1.0 - 1e-6) return 0.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  const double s = a + b;
  return a * b * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u))) / (s * s);
}

}  // namespace

double TimeCutoff::eval(double t) const {
  if (t <= tau - width) return 1.0;
  if (t >= tau) return 0.0;
  return smoothstep((tau - t) / width);
}

double TimeCutoff::derivative(double t) const {
  if (t <= tau - width || t >= tau) return 0.0;
  return -smoothstep_derivative((tau - t) / width) / width;
}

// ---------------------------------------------------------------------------
// Pairings
// ---------------------------------------------------------------------------

double xi_pairing_quadrature(double theta_value, const XiTestFunction& tf, const XiGrid& grid) {
  if (tf.support_left() < grid.xi_min || tf.support_right() > grid.xi_max)
    throw std::invalid_argument("xi_pairing_quadrature: test-function support not contained in xi grid");
  const int m = grid.cells();
  double sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const double mid = grid.xi_min + (j + 0.5) * grid.d_xi;
    if (mid > theta_value) break;  // chi vanishes from here on
    sum += tf.second_derivative(mid);
  }
  return sum * grid.d_xi;
}

double reduced_pairing(double theta_value, const XiTestFunction& tf) {
  return tf.first_derivative(theta_value);
}

// ---------------------------------------------------------------------------
// Trajectory functionals
// ---------------------------------------------------------------------------

namespace {

void check_traj_for_quadrature(const Trajectory& traj, double t_needed) {
  if (traj.snapshots.size() < 2)
    throw std::invalid_argument("trajectory: at least two snapshots required");
  if (!std::is_sorted(traj.times.begin(), traj.times.end()))
    throw std::invalid_argument("trajectory: snapshot times not sorted");
  if (traj.times.back() + 1e-12 < t_needed)
    throw std::invalid_argument("trajectory: snapshots do not cover the cutoff support");
}

// h^2 sum over nodes of w(x) * f(theta(x)), rows reduced deterministically.
template <typename F>
double weighted_sum(const ScalarField& weight, const ScalarField& theta, F&& f) {
  const int n = theta.n();
  std::vector<double> partial(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const double* w = weight.row(j);
    const double* th = theta.row(j);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(th[i]);
    partial[static_cast<size_t>(j)] = s;
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += partial[static_cast<size_t>(j)];
  return total * theta.grid().spacing() * theta.grid().spacing();
}

// Trapezoid rule over the snapshot times.
double time_trapezoid(const std::vector<double>& times, const std::vector<double>& vals) {
  double acc = 0.0;
  for (size_t i = 1; i < times.size(); ++i)
    acc += 0.5 * (times[i] - times[i - 1]) * (vals[i] + vals[i - 1]);
  return acc;
}

ScalarField grad_sq_field(const ScalarField& theta) {
  auto [gx, gy] = gradient(theta);
  ScalarField out(theta.grid());
  const int n = theta.n();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const double* rx = gx.row(j);
    const double* ry = gy.row(j);
    double* o = out.row(j);
    for (int i = 0; i < n; ++i) o[i] = rx[i] * rx[i] + ry[i] * ry[i];
  }
  return out;
}

}  // namespace

double defect_functional(const Trajectory& traj, const XiTestFunction& tf,
                         const TimeCutoff& cutoff, double kappa) {
  check_traj_for_quadrature(traj, cutoff.tau);
  std::vector<double> vals(traj.times.size(), 0.0);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double eta = cutoff.eval(traj.times[i]);
    if (eta == 0.0) continue;
    const ScalarField gsq = grad_sq_field(traj.snapshots[i]);
    vals[i] = eta * kappa *
              weighted_sum(gsq, traj.snapshots[i], [&](double th) { return tf.first_derivative(th); });
  }
  return time_trapezoid(traj.times, vals);
}

double cutoff_weighted_dissipation(const Trajectory& traj, const TimeCutoff& cutoff, double kappa) {
  check_traj_for_quadrature(traj, cutoff.tau);
  std::vector<double> vals(traj.times.size(), 0.0);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double eta = cutoff.eval(traj.times[i]);
    if (eta == 0.0) continue;
    const ScalarField gsq = grad_sq_field(traj.snapshots[i]);
    vals[i] = eta * kappa * weighted_sum(gsq, traj.snapshots[i], [](double) { return 1.0; });
  }
  return time_trapezoid(traj.times, vals);
}

// ---------------------------------------------------------------------------
// Weak forms
// ---------------------------------------------------------------------------

SpatialTestFunction SpatialTestFunction::constant(PeriodicGrid g) {
  return SpatialTestFunction{ScalarField(g, 1.0), ScalarField(g, 0.0), ScalarField(g, 0.0),
                             ScalarField(g, 0.0)};
}

SpatialTestFunction SpatialTestFunction::trig(PeriodicGrid g, int kx, int ky) {
  auto psi = ScalarField::sample(
      g, [&](double x, double y) { return std::sin(kTwoPi * kx * x) * std::cos(kTwoPi * ky * y); });
  auto px = ScalarField::sample(g, [&](double x, double y) {
    return kTwoPi * kx * std::cos(kTwoPi * kx * x) * std::cos(kTwoPi * ky * y);
  });
  auto py = ScalarField::sample(g, [&](double x, double y) {
    return -kTwoPi * ky * std::sin(kTwoPi * kx * x) * std::sin(kTwoPi * ky * y);
  });
  auto pl = ScalarField::sample(g, [&](double x, double y) {
    return -(kTwoPi * kTwoPi) * (static_cast<double>(kx) * kx + static_cast<double>(ky) * ky) *
           std::sin(kTwoPi * kx * x) * std::cos(kTwoPi * ky * y);
  });
  return SpatialTestFunction{std::move(psi), std::move(px), std::move(py), std::move(pl)};
}

namespace {

struct WeakTerms {
  double ddt = 0.0;   // integral eta' <psi, P(theta)>
  double adv = 0.0;   // integral eta <u . grad psi, P(theta)>
  double lap = 0.0;   // integral eta <lap psi, P(theta)>
  double diss = 0.0;  // integral eta <psi, |grad theta|^2 dP''-factor(theta)>
  double init = 0.0;  // eta(0) <psi, P(theta0)>
};

// <u . grad psi, G> for a constant-in-time shear. u = (v(y), 0) horizontal,
// (0, v(x)) vertical.
double advective_inner(const SpatialTestFunction& psi, const ScalarField& gfield,
                       const ActiveShear& shear) {
  if (shear.amplitude == 0.0) return 0.0;
  const int n = gfield.n();
  const double h = gfield.grid().spacing();
  std::vector<double> partial(static_cast<size_t>(n), 0.0);
  if (shear.axis == ShearAxis::horizontal) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      const double v = shear.amplitude * std::sin(kTwoPi * shear.frequency * (j * h));
      const double* px = psi.psi_x.row(j);
      const double* gf = gfield.row(j);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += px[i] * gf[i];
      partial[static_cast<size_t>(j)] = v * s;
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      const double* py = psi.psi_y.row(j);
      const double* gf = gfield.row(j);
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        s += shear.amplitude * std::sin(kTwoPi * shear.frequency * (i * h)) * py[i] * gf[i];
      partial[static_cast<size_t>(j)] = s;
    }
  }
  double total = 0.0;
  for (int j = 0; j < n; ++j) total += partial[static_cast<size_t>(j)];
  return total * h * h;
}

ActiveShear shear_at(const VelocitySchedule& schedule, double t) {
  if (t >= schedule.horizon) return ActiveShear{ShearAxis::horizontal, 1, 0.0};
  try {
    return velocity_at(schedule, t);
  } catch (const std::domain_error&) {
    // Query landed exactly on the mirror point; nudge into the interval.
    return velocity_at(schedule, std::nextafter(t, schedule.horizon));
  }
}

// Prepared per-snapshot data for the weak-form quadrature.
struct SnapData {
  double s_psi = 0.0;   // <psi, P(theta)>
  double s_lap = 0.0;   // <lap psi, P(theta)>
  double s_diss = 0.0;  // <psi, |grad theta|^2 Q(theta)>
  ScalarField pfield;   // P(theta) sampled on the grid
};

// P = profile.integral_to, Q = profile.derivative; `with_diss` skips the
// gradient work for the transport form.
WeakTerms assemble_weak_terms(const Trajectory& traj, const VelocitySchedule& schedule,
                              const TimeCutoff& eta, const SpatialTestFunction& psi,
                              const XiProfile& profile, bool with_diss) {
  check_traj_for_quadrature(traj, eta.tau);
  if (std::abs(traj.times.front()) > 1e-12)
    throw std::invalid_argument("weak residual: trajectory must start at t = 0");
  if (!(psi.psi.grid() == traj.snapshots.front().grid()))
    throw std::invalid_argument("weak residual: spatial test function on wrong grid");

  const size_t m = traj.times.size();
  auto prepare = [&](size_t i) {
    SnapData d;
    const ScalarField& th = traj.snapshots[i];
    d.pfield = ScalarField(th.grid());
    const int n = th.n();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      const double* src = th.row(j);
      double* dst = d.pfield.row(j);
      for (int i2 = 0; i2 < n; ++i2) dst[i2] = profile.integral_to(src[i2]);
    }
    d.s_psi = weighted_sum(psi.psi, th, [&](double) { return 0.0; });  // replaced below
    // Inner products against the prepared field.
    auto dot = [&](const ScalarField& w) {
      std::vector<double> partial(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
      for (int j = 0; j < n; ++j) {
        const double* a = w.row(j);
        const double* b = d.pfield.row(j);
        double s = 0.0;
        for (int i2 = 0; i2 < n; ++i2) s += a[i2] * b[i2];
        partial[static_cast<size_t>(j)] = s;
      }
      double total = 0.0;
      for (int j = 0; j < n; ++j) total += partial[static_cast<size_t>(j)];
      return total * th.grid().spacing() * th.grid().spacing();
    };
    d.s_psi = dot(psi.psi);
    d.s_lap = dot(psi.psi_lap);
    if (with_diss) {
      const ScalarField gsq = grad_sq_field(th);
      std::vector<double> partial(static_cast<size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
      for (int j = 0; j < n; ++j) {
        const double* p = psi.psi.row(j);
        const double* g = gsq.row(j);
        const double* t = th.row(j);
        double s = 0.0;
        for (int i2 = 0; i2 < n; ++i2) s += p[i2] * g[i2] * profile.derivative(t[i2]);
        partial[static_cast<size_t>(j)] = s;
      }
      double total = 0.0;
      for (int j = 0; j < n; ++j) total += partial[static_cast<size_t>(j)];
      d.s_diss = total * th.grid().spacing() * th.grid().spacing();
    }
    return d;
  };

  WeakTerms terms;
  SnapData prev = prepare(0);
  terms.init = eta.eval(0.0) * prev.s_psi;

  std::vector<double> ddt_vals(m), lap_vals(m), diss_vals(m);
  ddt_vals[0] = eta.derivative(traj.times[0]) * prev.s_psi;
  lap_vals[0] = eta.eval(traj.times[0]) * prev.s_lap;
  diss_vals[0] = eta.eval(traj.times[0]) * prev.s_diss;

  for (size_t i = 1; i < m; ++i) {
    SnapData cur = prepare(i);
    const double ta = traj.times[i - 1];
    const double tb = traj.times[i];
    ddt_vals[i] = eta.derivative(tb) * cur.s_psi;
    lap_vals[i] = eta.eval(tb) * cur.s_lap;
    diss_vals[i] = eta.eval(tb) * cur.s_diss;

    // u is constant within a stage; evaluate at the interval midpoint so
    // intervals that do not straddle a stage boundary are integrated with
    // the exact in-stage velocity.
    const ActiveShear u_mid = shear_at(schedule, 0.5 * (ta + tb));
    if (u_mid.amplitude != 0.0) {
      const double fa = eta.eval(ta) * advective_inner(psi, prev.pfield, u_mid);
      const double fb = eta.eval(tb) * advective_inner(psi, cur.pfield, u_mid);
      terms.adv += 0.5 * (tb - ta) * (fa + fb);
    }
    prev = std::move(cur);
  }
  terms.ddt = time_trapezoid(traj.times, ddt_vals);
  terms.lap = time_trapezoid(traj.times, lap_vals);
  terms.diss = time_trapezoid(traj.times, diss_vals);
  return terms;
}

}  // namespace

double weak_residual_kad(const Trajectory& traj, const VelocitySchedule& schedule,
                         const SeparableTest& test, double kappa) {
  if (test.g == nullptr) throw std::invalid_argument("weak_residual_kad: missing xi profile");
  const WeakTerms t = assemble_weak_terms(traj, schedule, test.eta, test.psi, *test.g, true);
  return t.ddt + t.adv + kappa * t.lap - kappa * t.diss + t.init;
}

double weak_residual_ktp(const Trajectory& traj, const VelocitySchedule& schedule,
                         const SeparableTest& test) {
  if (test.g == nullptr) throw std::invalid_argument("weak_residual_ktp: missing xi profile");
  const WeakTerms t = assemble_weak_terms(traj, schedule, test.eta, test.psi, *test.g, false);
  return t.ddt + t.adv + t.init;
}

double kad_laplacian_term(const Trajectory& traj, const SeparableTest& test, double kappa) {
  if (test.g == nullptr) throw std::invalid_argument("kad_laplacian_term: missing xi profile");
  VelocitySchedule dummy;
  dummy.horizon = std::max(traj.times.back(), test.eta.horizon);
  dummy.mirrored = false;
  const WeakTerms t = assemble_weak_terms(traj, dummy, test.eta, test.psi, *test.g, false);
  return kappa * t.lap;
}

double renormalization_residual(const Trajectory& traj, const VelocitySchedule& schedule,
                                const TimeCutoff& eta, const SpatialTestFunction& psi,
                                const XiProfile& phi_bump, double kappa) {
  const WeakTerms t = assemble_weak_terms(traj, schedule, eta, psi, phi_bump, true);
  return t.ddt + t.adv + kappa * t.lap - kappa * t.diss + t.init;
}

std::vector<double> entropy_series(const Trajectory& traj, const XiProfile& phi_bump) {
  std::vector<double> out(traj.snapshots.size(), 0.0);
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    const ScalarField& th = traj.snapshots[i];
    ScalarField ones(th.grid(), 1.0);
    out[i] = weighted_sum(ones, th, [&](double v) { return phi_bump.integral_to(v); });
  }
  return out;
}

}  // namespace anomdiss
