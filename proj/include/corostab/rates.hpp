#pragma once

#include <vector>

#include "corostab/material.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

/// Default path-time step for stress rates.
inline constexpr double kRateStep = 1e-5;

/// Kinematics and stress rates at one instant of a motion path.
struct RateSample {
  double t = 0.0;
  Tensor3 F;
  double J = 1.0;
  Tensor3 L, W;
  SymmetricTensor3 D;
  SymmetricTensor3 sigma, sigma_dot, zj_sigma;
  SymmetricTensor3 tau, tau_dot, zj_tau;

  /// Edot = F^T D F.
  SymmetricTensor3 edot() const { return SymmetricTensor3(F.transpose() * D.matrix() * F); }
};

/// Zaremba-Jaumann rate  d/dt[sigma] + sigma W - W sigma  (and the same
/// for tau), with d/dt by central differences of step h and (L, D, W)
/// from velocity_fields. Throws DomainExceeded near the path ends.
RateSample zj_rate(const MaterialLaw& law, const MotionPath& path, double t, double h = kRateStep);

/// Rotation history Q(t) with Qdot = W(t) Q, Q(t0) = 1, integrated by the
/// classical fourth-order Runge-Kutta scheme on a uniform grid and
/// re-orthonormalized after every step.
class CorotatedFrame {
 public:
  CorotatedFrame(MotionPath path, double t0, double t1, int n_steps);

  /// Q at an arbitrary time in [t0, t1]: one RK4 step from the nearest node.
  Tensor3 at(double t) const;

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Tensor3>& rotations() const noexcept { return rotations_; }
  /// max over nodes of |Q^T Q - 1|.
  double orthogonality_defect() const;

 private:
  Tensor3 spin(double t) const;
  Tensor3 step(const Tensor3& q, double t, double dt) const;

  MotionPath path_;
  std::vector<double> times_;
  std::vector<Tensor3> rotations_;
};

CorotatedFrame corotated_frame(const MotionPath& path, double t0, double t1, int n_steps);

/// Q d/dt[Q^T sigma Q] Q^T with the corotated stress sampled at t +- h on
/// one shared frame.
SymmetricTensor3 zj_rate_via_frame(const MaterialLaw& law, const MotionPath& path, double t,
                                   const CorotatedFrame& frame, double h = kRateStep);

/// <D^ZJ sigma, D>.
double csp_pairing(const RateSample& sample);
/// <D^ZJ tau, D>.
double kirchhoff_pairing(const RateSample& sample);

}  // namespace corostab
