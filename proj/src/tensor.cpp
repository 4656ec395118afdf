#include "corostab/tensor.hpp"

#include <cmath>
#include <utility>

#include "corostab/errors.hpp"

namespace corostab {

SpectralData spectral_decompose(const SymmetricTensor3& s) {
  Eigen::SelfAdjointEigenSolver<Tensor3> solver(s.matrix());
  SpectralData out{solver.eigenvalues(), solver.eigenvectors()};
  for (int k = 0; k < 3; ++k) {
    int big = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(out.vectors(i, k)) > std::abs(out.vectors(big, k))) big = i;
    }
    if (out.vectors(big, k) < 0.0) out.vectors.col(k) *= -1.0;
  }
  return out;
}

SymmetricTensor3 spectral_map(const SymmetricTensor3& s, const std::function<double(double)>& f) {
  const SpectralData sd = spectral_decompose(s);
  Vector3 mapped;
  for (int i = 0; i < 3; ++i) mapped(i) = f(sd.values(i));
  return SymmetricTensor3(sd.vectors * mapped.asDiagonal() * sd.vectors.transpose());
}

SymmetricTensor3 log_spd(const SymmetricTensor3& s, double tolerance) {
  const SpectralData sd = spectral_decompose(s);
  if (sd.values(0) <= tolerance) {
    throw NonPositiveDefinite("log_spd: smallest eigenvalue " + std::to_string(sd.values(0)) +
                              " is not positive");
  }
  Vector3 logs = sd.values.array().log();
  return SymmetricTensor3(sd.vectors * logs.asDiagonal() * sd.vectors.transpose());
}

SymmetricTensor3 exp_sym(const SymmetricTensor3& s) {
  return spectral_map(s, [](double v) { return std::exp(v); });
}

SymmetricTensor3 sqrt_spd(const SymmetricTensor3& s, double tolerance) {
  const SpectralData sd = spectral_decompose(s);
  if (sd.values(0) <= tolerance) throw NonPositiveDefinite("sqrt_spd: matrix is not positive definite");
  Vector3 roots = sd.values.array().sqrt();
  return SymmetricTensor3(sd.vectors * roots.asDiagonal() * sd.vectors.transpose());
}

Tensor3 axial_to_skew(const Vector3& w) {
  Tensor3 k;
  k << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return k;
}

Tensor3 rotation_from_axial(const Vector3& w) {
  const double angle = w.norm();
  if (angle < 1e-300) return Tensor3::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

Tensor3 gram_schmidt(const Tensor3& q) {
  Tensor3 out = q;
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < k; ++j) out.col(k) -= out.col(j).dot(out.col(k)) * out.col(j);
    out.col(k).normalize();
  }
  return out;
}

DeformationState strain_measures(const Tensor3& F) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw NonInvertible("strain_measures: det F = " + std::to_string(J) + " is not positive");

  DeformationState st;
  st.F = F;
  st.J = J;
  st.C = SymmetricTensor3(F.transpose() * F);
  st.B = SymmetricTensor3(F * F.transpose());
  st.E = SymmetricTensor3(0.5 * (st.C.matrix() - Tensor3::Identity()));
  st.spectral = spectral_decompose(st.E);
  for (int i = 0; i < 3; ++i) {
    const double two_e = 2.0 * st.spectral.values(i);
    st.stretches(i) = std::sqrt(1.0 + two_e);
    st.log_stretches(i) = 0.5 * std::log1p(two_e);
  }
  // V = sum lambda_i n^i (x) n^i with n^i = F U^i / lambda_i.
  const Tensor3 u = st.spatial_vectors();
  const Vector3 inv = st.stretches.cwiseInverse();
  const Vector3 log_weights = st.log_stretches.cwiseProduct(inv.cwiseProduct(inv));
  st.V = SymmetricTensor3(u * inv.asDiagonal() * u.transpose());
  st.log_v = SymmetricTensor3(u * log_weights.asDiagonal() * u.transpose());
  return st;
}

DeformationState state_from_log_stretches(const Vector3& x) {
  return strain_measures(Tensor3(x.array().exp().matrix().asDiagonal()));
}

Tensor3 edot_components(const DeformationState& state, const SymmetricTensor3& edot) {
  const Tensor3& u = state.spectral.vectors;
  return sym(u.transpose() * edot.matrix() * u);
}

MotionPath::MotionPath(Evaluator eval, double t0, double t1) : eval_(std::move(eval)), t0_(t0), t1_(t1) {
  if (!(t0 < t1)) throw Error("MotionPath: empty time domain");
}

Tensor3 MotionPath::operator()(double t) const {
  if (!contains(t)) {
    throw DomainExceeded("MotionPath: t = " + std::to_string(t) + " outside [" + std::to_string(t0_) + ", " +
                         std::to_string(t1_) + "]");
  }
  return eval_(t);
}

MotionPath pure_stretch_path(double rate, double t0, double t1) {
  return MotionPath(
      [rate](double t) {
        Tensor3 f = Tensor3::Identity();
        f(0, 0) = std::exp(rate * t);
        return f;
      },
      t0, t1);
}

MotionPath rigid_rotation_path(double omega, const Vector3& axis, double t0, double t1) {
  const Vector3 n = axis.normalized();
  return MotionPath([omega, n](double t) { return rotation_from_axial(omega * t * n); }, t0, t1);
}

MotionPath simple_shear_path(double t0, double t1) {
  return MotionPath(
      [](double t) {
        Tensor3 f = Tensor3::Identity();
        f(0, 1) = t;
        return f;
      },
      t0, t1);
}

MotionPath superpose_rotation(const MotionPath& base, double omega, const Vector3& axis) {
  const Vector3 n = axis.normalized();
  return MotionPath([base, omega, n](double t) { return Tensor3(rotation_from_axial(omega * t * n) * base(t)); },
                    base.t0(), base.t1());
}

MotionPath smooth_path(const SmoothPathSpec& spec, double t0, double t1) {
  return MotionPath(
      [spec](double t) {
        const SymmetricTensor3 x = spec.x0 + t * spec.x1 + (t * t) * spec.x2;
        return Tensor3(rotation_from_axial(spec.w0 + t * spec.w1) * exp_sym(x).matrix());
      },
      t0, t1);
}

double default_step(double t) { return 1e-5 * std::max(1.0, std::abs(t)); }

Tensor3 central_rate(const std::function<Tensor3(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

VelocityFields velocity_fields(const MotionPath& path, double t, double h) {
  if (h <= 0.0) h = default_step(t);
  if (!path.contains(t - h) || !path.contains(t + h)) {
    throw DomainExceeded("velocity_fields: stencil t +- h leaves the path domain");
  }
  const Tensor3 fdot = central_rate([&path](double s) { return path(s); }, t, h);
  const Tensor3 l = fdot * path(t).inverse();
  return VelocityFields{l, SymmetricTensor3(l), skew(l)};
}

}  // namespace corostab
