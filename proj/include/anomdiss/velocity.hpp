#pragma once

#include <vector>

namespace anomdiss {

/// Orientation of a shear stage. A horizontal stage moves mass in x with a
/// profile that depends on y, u = (v(y), 0); a vertical stage is u = (0, v(x)).
/// Either way the velocity is divergence-free by construction.
enum class ShearAxis { horizontal, vertical };

/// One constant-in-time sinusoidal shear: v(s) = amplitude * sin(2*pi*frequency*s),
/// where s is the transverse coordinate.
struct ShearStage {
  ShearAxis axis = ShearAxis::horizontal;
  int frequency = 1;
  double amplitude = 0.0;
  double start = 0.0;
  double duration = 0.0;

  double profile(double s) const;
};

/// The stage actually acting at a query time: same shape as a ShearStage,
/// with any mirror sign folded into the amplitude.
struct ActiveShear {
  ShearAxis axis = ShearAxis::horizontal;
  int frequency = 1;
  double amplitude = 0.0;
};

/// A finite alternating-shear schedule. The stages partition [0, T/2)
/// exactly; when `mirrored`, the velocity on [T/2, T] is u(t) = -u_*(T - t).
/// When not mirrored the velocity is zero on [T/2, T].
struct VelocitySchedule {
  std::vector<ShearStage> stages;
  double horizon = 1.0;  // T
  bool mirrored = true;
  double alpha = 0.5;
  int rho = 2;
  double q = 0.5;

  double half_time() const { return horizon / 2.0; }
  int max_frequency() const;
};

/// Geometric frequency/duration family: lambda_n = lambda0 * rho^n,
/// tau_n = (T/2)(1-q) q^n with the last stage absorbing the geometric tail
/// so the durations sum to exactly T/2. Axes alternate starting horizontal.
/// Requires q * rho^alpha < 1 (otherwise the L1-in-time Hoelder norm would
/// diverge in the untruncated limit).
VelocitySchedule build_schedule(double alpha, double T, int lambda0, double amplitude,
                                int rho, double q, int n_stages, bool mirrored = true);

/// Stage acting at time t in [0, T) (t != T/2 when mirrored; the velocity
/// is only piecewise-defined there). Throws std::out_of_range / domain_error.
ActiveShear velocity_at(const VelocitySchedule& s, double t);

/// sup over stages of |amplitude| (sinusoidal profiles attain it).
double sup_norm(const VelocitySchedule& s);

/// sum_n tau_n * (sup|v_n| + [v_n]_alpha), the Hoelder-alpha seminorm of each
/// stage profile estimated by dense pairwise sampling over n_samples points
/// (torus metric in the transverse coordinate).
double l1_holder_norm(const VelocitySchedule& s, double alpha, int n_samples = 4096);

}  // namespace anomdiss
