#include "corostab/random.hpp"

#include <cmath>
#include <numbers>

namespace corostab {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector3 Rng::uniform_vector(double lo, double hi) {
  Vector3 v;
  for (int i = 0; i < 3; ++i) v(i) = uniform(lo, hi);
  return v;
}

Tensor3 Rng::rotation() {
  Eigen::Quaterniond q(normal(), normal(), normal(), normal());
  q.normalize();
  return q.toRotationMatrix();
}

SymmetricTensor3 Rng::goe() {
  Tensor3 m;
  const double off = std::sqrt(0.5);
  for (int i = 0; i < 3; ++i) {
    m(i, i) = normal();
    for (int j = i + 1; j < 3; ++j) m(i, j) = m(j, i) = off * normal();
  }
  return SymmetricTensor3(m);
}

SymmetricTensor3 Rng::unit_symmetric() {
  const SymmetricTensor3 g = goe();
  return (1.0 / g.norm()) * g;
}

SmoothPathSpec random_path_spec(Rng& rng, const Vector3& x, double rate_scale) {
  const Tensor3 frame = rng.rotation();
  SmoothPathSpec spec;
  spec.x0 = SymmetricTensor3(frame * x.asDiagonal() * frame.transpose());
  spec.x1 = rate_scale * rng.goe();
  spec.x2 = (0.5 * rate_scale) * rng.goe();
  spec.w0 = rng.uniform_vector(-3.0, 3.0);
  for (int i = 0; i < 3; ++i) spec.w1(i) = rate_scale * rng.normal();
  return spec;
}

}  // namespace corostab
