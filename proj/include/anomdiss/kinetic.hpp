#pragma once

#include <limits>
#include <vector>

#include "anomdiss/grid.hpp"
#include "anomdiss/solver.hpp"
#include "anomdiss/velocity.hpp"

namespace anomdiss {

/// Indicator of xi <= theta (the microscopic lift of a scalar value).
double chi(double theta_value, double xi);

/// Uniform quadrature grid in the kinetic variable xi.
struct XiGrid {
  double xi_min = -16.0;
  double xi_max = 16.0;
  double d_xi = 1.0 / 256.0;

  int cells() const;
};

/// A profile in xi stored by its piecewise-constant second derivative
/// (breakpoints b_0 < ... < b_m, value c_i on [b_i, b_{i+1}), zero outside)
/// together with its exact stacked primitives: the first derivative is
/// piecewise linear, the value piecewise quadratic and the running integral
/// piecewise cubic, all evaluated in closed form, never by quadrature.
class XiTestFunction {
 public:
  XiTestFunction(std::vector<double> breakpoints, std::vector<double> values);

  /// The construction used to bound the defect from below: second
  /// derivative -epsilon on [-3-1/eps, -3), 1 on [-3, -1), -epsilon on
  /// [-1, -1+1/eps), 0 otherwise. Requires 0 < epsilon < 1/2.
  static XiTestFunction paper(double epsilon);

  double second_derivative(double xi) const;
  double first_derivative(double xi) const;  // integral of the second derivative from -inf
  double value(double xi) const;             // integral of the first derivative
  double integral_to(double xi) const;       // integral of the value

  double support_left() const { return breaks_.front(); }
  double support_right() const { return breaks_.back(); }
  double max_abs_second() const;
  double epsilon() const { return epsilon_; }  // NaN unless built by paper()

 private:
  std::vector<double> breaks_;
  std::vector<double> c_;   // second derivative per segment
  std::vector<double> f_;   // first derivative at breakpoints
  std::vector<double> g_;   // value at breakpoints
  std::vector<double> gg_;  // integral of value at breakpoints
  double epsilon_ = std::numeric_limits<double>::quiet_NaN();
};

/// C^2 compactly supported polynomial bump scale*(1-s^2)^3, s = (xi-center)/radius,
/// with closed-form derivatives and running integral. Used as the smooth
/// xi-profile in weak-form tests.
class PolyBump {
 public:
  PolyBump(double center, double radius, double scale = 1.0);

  double second_derivative(double xi) const;
  double first_derivative(double xi) const;
  double value(double xi) const;
  double integral_to(double xi) const;

  double support_left() const { return center_ - radius_; }
  double support_right() const { return center_ + radius_; }

 private:
  double center_, radius_, scale_;
};

/// Smooth time cutoff: eta = 1 on [0, tau - width], 0 on [tau, horizon],
/// C-infinity monotone transition in between (so test functions vanish at
/// the top of the time interval).
struct TimeCutoff {
  double tau = 0.5;
  double width = 0.1;
  double horizon = 1.0;

  TimeCutoff() = default;
  TimeCutoff(double tau_, double width_, double horizon_);

  double eval(double t) const;
  double derivative(double t) const;
};

// ---------------------------------------------------------------------------
// Pairings in xi.
// ---------------------------------------------------------------------------

/// Midpoint quadrature of integral chi(theta, xi) * d2phi(xi) dxi over the
/// xi grid. Error <= d_xi * max|d2phi| (the single cell straddling the chi
/// discontinuity). Throws if the test-function support is not contained in
/// the grid.
double xi_pairing_quadrature(double theta_value, const XiTestFunction& tf, const XiGrid& grid);

/// Closed form of the same pairing: integral chi_theta d2phi = dphi(theta).
double reduced_pairing(double theta_value, const XiTestFunction& tf);

// ---------------------------------------------------------------------------
// Space-time functionals on trajectories.
// ---------------------------------------------------------------------------

/// integral eta(t) * kappa * |grad theta|^2 * dphi(theta) dx dt by trapezoid
/// in time over the snapshots and collocation quadrature in space: the
/// microscopic advection term paired with the test function.
double defect_functional(const Trajectory& traj, const XiTestFunction& tf,
                         const TimeCutoff& cutoff, double kappa);

/// integral eta(t) * kappa * |grad theta|^2 dx dt with the same quadrature
/// (the cutoff-weighted dissipation; the defect is sandwiched against it).
double cutoff_weighted_dissipation(const Trajectory& traj, const TimeCutoff& cutoff, double kappa);

/// Spatial factor psi of a separable test function, sampled together with
/// its analytic gradient and Laplacian.
struct SpatialTestFunction {
  ScalarField psi;
  ScalarField psi_x;
  ScalarField psi_y;
  ScalarField psi_lap;

  static SpatialTestFunction constant(PeriodicGrid g);
  /// psi = sin(2 pi kx x) cos(2 pi ky y), a generic smooth periodic choice.
  static SpatialTestFunction trig(PeriodicGrid g, int kx, int ky);
};

/// Xi-profile access used by the weak forms; adapters below expose both
/// XiTestFunction and PolyBump through it.
struct XiProfile {
  virtual ~XiProfile() = default;
  virtual double value(double xi) const = 0;
  virtual double derivative(double xi) const = 0;
  virtual double second_derivative(double xi) const = 0;
  virtual double integral_to(double xi) const = 0;
};

class TestFunctionProfile final : public XiProfile {
 public:
  explicit TestFunctionProfile(const XiTestFunction& tf) : tf_(&tf) {}
  double value(double xi) const override { return tf_->value(xi); }
  double derivative(double xi) const override { return tf_->first_derivative(xi); }
  double second_derivative(double xi) const override { return tf_->second_derivative(xi); }
  double integral_to(double xi) const override { return tf_->integral_to(xi); }

 private:
  const XiTestFunction* tf_;
};

class BumpProfile final : public XiProfile {
 public:
  explicit BumpProfile(const PolyBump& b) : b_(&b) {}
  double value(double xi) const override { return b_->value(xi); }
  double derivative(double xi) const override { return b_->first_derivative(xi); }
  double second_derivative(double xi) const override { return b_->second_derivative(xi); }
  double integral_to(double xi) const override { return b_->integral_to(xi); }

 private:
  const PolyBump* b_;
};

/// Separable space-time-xi test function phi(t,x,xi) = eta(t) psi(x) g(xi).
struct SeparableTest {
  TimeCutoff eta;
  SpatialTestFunction psi;
  const XiProfile* g = nullptr;
};

/// Weak residual of the microscopic advection-diffusion equation:
///   integral [ chi d_t phi + u . chi grad_x phi - kappa chi Lap phi
///              + kappa |grad theta|^2 chi d_xi^2 phi ] dxi dx dt
///   + integral chi_{theta0} phi|_{t=0} dxi dx.
/// Zero for exact solutions; decays second-order in snapshot density.
double weak_residual_kad(const Trajectory& traj, const VelocitySchedule& schedule,
                         const SeparableTest& test, double kappa);

/// Weak residual of the microscopic transport equation (the same form
/// without the kappa terms). For anomalous trajectories this tends to the
/// (nonzero) defect as kappa -> 0; for smooth transport it vanishes.
double weak_residual_ktp(const Trajectory& traj, const VelocitySchedule& schedule,
                         const SeparableTest& test);

/// The isolated kappa-Laplacian term kappa * integral chi Lap phi, which
/// must vanish linearly in kappa.
double kad_laplacian_term(const Trajectory& traj, const SeparableTest& test, double kappa);

/// Weak residual of the renormalized equation for Phi built from phi_bump:
/// Phi = integral of the bump, Phi' = bump, Phi'' = bump derivative.
/// Near zero for solver trajectories (the chain-rule identity).
double renormalization_residual(const Trajectory& traj, const VelocitySchedule& schedule,
                                const TimeCutoff& eta, const SpatialTestFunction& psi,
                                const XiProfile& phi_bump, double kappa);

/// integral Phi(theta(t)) dx per snapshot, Phi = running integral of the bump
/// (nonincreasing in t when the bump is nondecreasing on the range of theta).
std::vector<double> entropy_series(const Trajectory& traj, const XiProfile& phi_bump);

}  // namespace anomdiss
