#include "anomdiss/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace anomdiss {

double ShearStage::profile(double s) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency * s);
}

int VelocitySchedule::max_frequency() const {
  int m = 0;
  for (const auto& st : stages) m = std::max(m, st.frequency);
  return m;
}

VelocitySchedule build_schedule(double alpha, double T, int lambda0, double amplitude,
                                int rho, double q, int n_stages, bool mirrored) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("velocity.alpha: must lie in [0, 1)");
  if (T <= 0.0) throw std::invalid_argument("velocity.T: must be positive");
  if (lambda0 < 1) throw std::invalid_argument("velocity.lambda0: must be a positive integer");
  if (rho < 1) throw std::invalid_argument("velocity.rho: must be a positive integer");
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("velocity.q: must lie in (0, 1)");
  if (n_stages < 1) throw std::invalid_argument("velocity.n_stages: must be >= 1");
  if (q * std::pow(static_cast<double>(rho), alpha) >= 1.0)
    throw std::invalid_argument(
        "velocity.q/velocity.rho/velocity.alpha: require q * rho^alpha < 1, "
        "otherwise the L1-in-time C^alpha norm diverges in the untruncated limit");

  VelocitySchedule s;
  s.horizon = T;
  s.mirrored = mirrored;
  s.alpha = alpha;
  s.rho = rho;
  s.q = q;
  s.stages.reserve(static_cast<size_t>(n_stages));

  const double half = T / 2.0;
  double t = 0.0;
  double lambda = lambda0;
  for (int n = 0; n < n_stages; ++n) {
    ShearStage st;
    st.axis = (n % 2 == 0) ? ShearAxis::horizontal : ShearAxis::vertical;
    st.frequency = static_cast<int>(lambda);
    st.amplitude = amplitude;
    st.start = t;
    // Last stage absorbs the geometric tail so the sum is exactly T/2.
    st.duration = (n == n_stages - 1) ? half - t : half * (1.0 - q) * std::pow(q, n);
    if (st.duration <= 0.0)
      throw std::invalid_argument("velocity.n_stages: stage durations underflowed to zero");
    t += st.duration;
    lambda *= rho;
    if (lambda > 1e9) throw std::invalid_argument("velocity.n_stages: frequency overflow");
    s.stages.push_back(st);
  }
  return s;
}

ActiveShear velocity_at(const VelocitySchedule& s, double t) {
  const double T = s.horizon;
  if (t < 0.0 || t >= T) throw std::out_of_range("velocity_at: t outside [0, T)");
  const double half = s.half_time();

  double query = t;
  double sign = 1.0;
  if (t >= half) {
    if (!s.mirrored) return ActiveShear{ShearAxis::horizontal, 1, 0.0};
    if (t == half)
      throw std::domain_error("velocity_at: u is only piecewise-defined at t = T/2");
    query = T - t;  // in (0, T/2)
    sign = -1.0;
  }

  // Stage n covers [start_n, start_n + tau_n).
  auto it = std::upper_bound(s.stages.begin(), s.stages.end(), query,
                             [](double v, const ShearStage& st) { return v < st.start; });
  if (it == s.stages.begin()) throw std::out_of_range("velocity_at: empty schedule");
  const ShearStage& st = *(it - 1);
  return ActiveShear{st.axis, st.frequency, sign * st.amplitude};
}

double sup_norm(const VelocitySchedule& s) {
  double m = 0.0;
  for (const auto& st : s.stages) m = std::max(m, std::abs(st.amplitude));
  return m;
}

namespace {

// Hoelder-alpha seminorm of one stage profile by dense sampling,
// sup_{s != s'} |v(s) - v(s')| / d(s,s')^alpha with the torus metric.
double holder_seminorm(const ShearStage& st, double alpha, int n_samples) {
  std::vector<double> v(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    v[static_cast<size_t>(i)] = st.profile(static_cast<double>(i) / n_samples);

  std::vector<double> per_lag(static_cast<size_t>(n_samples / 2), 0.0);
#pragma omp parallel for schedule(static)
  for (int lag = 1; lag <= n_samples / 2; ++lag) {
    double osc = 0.0;
    for (int i = 0; i < n_samples; ++i) {
      const int j = (i + lag) % n_samples;
      osc = std::max(osc, std::abs(v[static_cast<size_t>(i)] - v[static_cast<size_t>(j)]));
    }
    const double dist = static_cast<double>(lag) / n_samples;  // <= 1/2, torus distance
    per_lag[static_cast<size_t>(lag - 1)] = osc / std::pow(dist, alpha);
  }
  double best = 0.0;
  for (double x : per_lag) best = std::max(best, x);
  return best;
}

}  // namespace

double l1_holder_norm(const VelocitySchedule& s, double alpha, int n_samples) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw std::invalid_argument("l1_holder_norm: alpha must lie in [0, 1)");
  if (n_samples < 16) throw std::invalid_argument("l1_holder_norm: n_samples too small");
  double total = 0.0;
  for (const auto& st : s.stages)
    total += st.duration * (std::abs(st.amplitude) + holder_seminorm(st, alpha, n_samples));
  return total;
}

}  // namespace anomdiss
