#include "corostab/rates.hpp"

#include <algorithm>
#include <cmath>

#include "corostab/errors.hpp"
#include "corostab/stress.hpp"

namespace corostab {

namespace {

StressState stress_at(const MaterialLaw& law, const MotionPath& path, double t) {
  return cauchy_stress(law, strain_measures(path(t)));
}

}  // namespace

RateSample zj_rate(const MaterialLaw& law, const MotionPath& path, double t, double h) {
  if (!path.contains(t - h) || !path.contains(t + h)) {
    throw DomainExceeded("zj_rate: stencil t +- h leaves the path domain");
  }
  RateSample s;
  s.t = t;
  s.F = path(t);
  s.J = s.F.determinant();
  const VelocityFields v = velocity_fields(path, t, h);
  s.L = v.L;
  s.D = v.D;
  s.W = v.W;

  const StressState now = stress_at(law, path, t);
  const StressState plus = stress_at(law, path, t + h);
  const StressState minus = stress_at(law, path, t - h);
  s.sigma = now.sigma;
  s.tau = now.tau;
  s.sigma_dot = SymmetricTensor3((plus.sigma.matrix() - minus.sigma.matrix()) / (2.0 * h));
  s.tau_dot = SymmetricTensor3((plus.tau.matrix() - minus.tau.matrix()) / (2.0 * h));

  const Tensor3& sig = s.sigma.matrix();
  const Tensor3& ta = s.tau.matrix();
  s.zj_sigma = SymmetricTensor3(s.sigma_dot.matrix() + sig * s.W - s.W * sig);
  s.zj_tau = SymmetricTensor3(s.tau_dot.matrix() + ta * s.W - s.W * ta);
  return s;
}

CorotatedFrame::CorotatedFrame(MotionPath path, double t0, double t1, int n_steps) : path_(std::move(path)) {
  if (n_steps < 1 || !(t0 < t1)) throw Error("CorotatedFrame: need t0 < t1 and at least one step");
  if (!path_.contains(t0) || !path_.contains(t1)) throw DomainExceeded("CorotatedFrame: window leaves path domain");
  const double dt = (t1 - t0) / n_steps;
  times_.reserve(n_steps + 1);
  rotations_.reserve(n_steps + 1);
  times_.push_back(t0);
  rotations_.push_back(Tensor3::Identity());
  for (int k = 0; k < n_steps; ++k) {
    const double t = t0 + k * dt;
    rotations_.push_back(step(rotations_.back(), t, dt));
    times_.push_back(k + 1 == n_steps ? t1 : t0 + (k + 1) * dt);
  }
}

Tensor3 CorotatedFrame::spin(double t) const {
  const double h = default_step(t);
  if (path_.contains(t - h) && path_.contains(t + h)) return velocity_fields(path_, t).W;
  // Second-order one-sided stencil at the path ends.
  const double dir = path_.contains(t + 2.0 * h) ? 1.0 : -1.0;
  const Tensor3 fdot = dir * (-3.0 * path_(t) + 4.0 * path_(t + dir * h) - path_(t + 2.0 * dir * h)) / (2.0 * h);
  return skew(Tensor3(fdot * path_(t).inverse()));
}

Tensor3 CorotatedFrame::step(const Tensor3& q, double t, double dt) const {
  const Tensor3 k1 = spin(t) * q;
  const Tensor3 k2 = spin(t + 0.5 * dt) * (q + 0.5 * dt * k1);
  const Tensor3 k3 = spin(t + 0.5 * dt) * (q + 0.5 * dt * k2);
  const Tensor3 k4 = spin(t + dt) * (q + dt * k3);
  return gram_schmidt(q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

Tensor3 CorotatedFrame::at(double t) const {
  if (t < times_.front() || t > times_.back()) throw DomainExceeded("CorotatedFrame::at: t outside the frame");
  const double dt = times_[1] - times_[0];
  const auto k = static_cast<std::size_t>(
      std::clamp<long>(std::lround((t - times_.front()) / dt), 0L, static_cast<long>(times_.size()) - 1));
  if (t == times_[k]) return rotations_[k];
  return step(rotations_[k], times_[k], t - times_[k]);
}

double CorotatedFrame::orthogonality_defect() const {
  double worst = 0.0;
  for (const Tensor3& q : rotations_) worst = std::max(worst, (q.transpose() * q - Tensor3::Identity()).norm());
  return worst;
}

CorotatedFrame corotated_frame(const MotionPath& path, double t0, double t1, int n_steps) {
  return CorotatedFrame(path, t0, t1, n_steps);
}

SymmetricTensor3 zj_rate_via_frame(const MaterialLaw& law, const MotionPath& path, double t,
                                   const CorotatedFrame& frame, double h) {
  auto corotated = [&](double s) {
    const Tensor3 q = frame.at(s);
    return Tensor3(q.transpose() * stress_at(law, path, s).sigma.matrix() * q);
  };
  const Tensor3 q = frame.at(t);
  const Tensor3 rate = (corotated(t + h) - corotated(t - h)) / (2.0 * h);
  return SymmetricTensor3(q * rate * q.transpose());
}

double csp_pairing(const RateSample& sample) { return frobenius(sample.zj_sigma.matrix(), sample.D.matrix()); }

double kirchhoff_pairing(const RateSample& sample) { return frobenius(sample.zj_tau.matrix(), sample.D.matrix()); }

}  // namespace corostab
