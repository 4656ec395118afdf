#pragma once

#include <functional>

#include <Eigen/Dense>

namespace corostab {

using Vector3 = Eigen::Vector3d;
using Tensor3 = Eigen::Matrix3d;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// A 3x3 tensor that is symmetric by construction: the input is replaced
/// by its symmetric part, so roundoff asymmetry never leaks downstream.
class SymmetricTensor3 {
 public:
  SymmetricTensor3() : m_(Tensor3::Zero()) {}
  explicit SymmetricTensor3(const Tensor3& m) : m_(0.5 * (m + m.transpose())) {}

  static SymmetricTensor3 zero() { return SymmetricTensor3(); }
  static SymmetricTensor3 identity() { return SymmetricTensor3(Tensor3::Identity()); }
  static SymmetricTensor3 diagonal(const Vector3& d) { return SymmetricTensor3(Tensor3(d.asDiagonal())); }

  const Tensor3& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace(); }
  double norm() const { return m_.norm(); }

  friend SymmetricTensor3 operator+(const SymmetricTensor3& a, const SymmetricTensor3& b) {
    return SymmetricTensor3(a.m_ + b.m_);
  }
  friend SymmetricTensor3 operator-(const SymmetricTensor3& a, const SymmetricTensor3& b) {
    return SymmetricTensor3(a.m_ - b.m_);
  }
  friend SymmetricTensor3 operator*(double s, const SymmetricTensor3& a) { return SymmetricTensor3(s * a.m_); }

 private:
  Tensor3 m_;
};

inline Tensor3 sym(const Tensor3& a) { return 0.5 * (a + a.transpose()); }
inline Tensor3 skew(const Tensor3& a) { return 0.5 * (a - a.transpose()); }
/// Frobenius pairing <A, B> = tr(A^T B).
inline double frobenius(const Tensor3& a, const Tensor3& b) { return (a.array() * b.array()).sum(); }

/// Eigenvalues ascending, eigenvectors as orthonormal columns. Each
/// eigenvector has its largest-magnitude component positive.
struct SpectralData {
  Vector3 values;
  Tensor3 vectors;

  Tensor3 reassemble() const { return vectors * values.asDiagonal() * vectors.transpose(); }
  Vector3 vector(int i) const { return vectors.col(i); }
};

SpectralData spectral_decompose(const SymmetricTensor3& s);

/// Applies a scalar function to the spectrum: sum_i f(e_i) U^i (x) U^i.
SymmetricTensor3 spectral_map(const SymmetricTensor3& s, const std::function<double(double)>& f);

/// Matrix logarithm of an SPD tensor; throws NonPositiveDefinite when the
/// smallest eigenvalue is <= tolerance.
SymmetricTensor3 log_spd(const SymmetricTensor3& s, double tolerance = 1e-12);
SymmetricTensor3 exp_sym(const SymmetricTensor3& s);
SymmetricTensor3 sqrt_spd(const SymmetricTensor3& s, double tolerance = 1e-12);

/// Rotation exp(skew(w)) for an axial vector w (Rodrigues).
Tensor3 rotation_from_axial(const Vector3& w);
Tensor3 axial_to_skew(const Vector3& w);

/// Orthonormalizes the columns of a near-orthogonal matrix (modified
/// Gram-Schmidt, column order preserved).
Tensor3 gram_schmidt(const Tensor3& q);

/// Homogeneous deformation state with every derived measure cached.
/// The spectral frame is that of E (equivalently C); stretches and
/// log-stretches are listed in the same ascending order.
struct DeformationState {
  Tensor3 F;
  SymmetricTensor3 C, B, E, V, log_v;
  double J = 1.0;
  SpectralData spectral;  ///< of E: e_i ascending, Lagrangian axes U^i
  Vector3 stretches;      ///< lambda_i = sqrt(1 + 2 e_i)
  Vector3 log_stretches;  ///< x_i = log lambda_i

  /// Spatial eigenvectors u^i = F U^i (not unit in general).
  Tensor3 spatial_vectors() const { return F * spectral.vectors; }
};

/// Throws NonInvertible if det F <= 0.
DeformationState strain_measures(const Tensor3& F);

/// Stretch-only state F = diag(exp(x)).
DeformationState state_from_log_stretches(const Vector3& x);

/// Components E_jk = <Edot U^j, U^k> of a symmetric tensor in the state's
/// Lagrangian frame.
Tensor3 edot_components(const DeformationState& state, const SymmetricTensor3& edot);

/// Smooth map t -> F(t) with det F > 0 on [t0, t1].
class MotionPath {
 public:
  using Evaluator = std::function<Tensor3(double)>;

  MotionPath(Evaluator eval, double t0, double t1);

  /// Throws DomainExceeded outside [t0, t1].
  Tensor3 operator()(double t) const;
  double t0() const noexcept { return t0_; }
  double t1() const noexcept { return t1_; }
  bool contains(double t) const noexcept { return t >= t0_ && t <= t1_; }

 private:
  Evaluator eval_;
  double t0_, t1_;
};

/// F(t) = diag(exp(rate t), 1, 1).
MotionPath pure_stretch_path(double rate = 1.0, double t0 = -1.0, double t1 = 1.0);
/// F(t) = rotation by omega t about a unit axis.
MotionPath rigid_rotation_path(double omega, const Vector3& axis = Vector3::UnitZ(), double t0 = -1.0,
                               double t1 = 1.0);
/// F(t) = 1 + t e1 (x) e2.
MotionPath simple_shear_path(double t0 = -1.0, double t1 = 1.0);
/// F(t) = Q(t) F_base(t) with Q(t) = rotation by omega t about axis.
MotionPath superpose_rotation(const MotionPath& base, double omega, const Vector3& axis = Vector3::UnitZ());

/// Smooth path F(t) = R(t) exp(X(t)) with R(t) = exp(skew(w0 + t w1)) and
/// X(t) = X0 + t X1 + t^2 X2. At t = 0 the log-stretches are eig(X0).
struct SmoothPathSpec {
  SymmetricTensor3 x0, x1, x2;
  Vector3 w0 = Vector3::Zero(), w1 = Vector3::Zero();
};
MotionPath smooth_path(const SmoothPathSpec& spec, double t0 = -1.0, double t1 = 1.0);

struct VelocityFields {
  Tensor3 L;
  SymmetricTensor3 D;
  Tensor3 W;
};

/// Default central-difference step 1e-5 * max(1, |t|).
double default_step(double t);

/// L = Fdot F^-1 with Fdot by central differences; D = sym L, W = skew L.
/// h <= 0 selects default_step(t). Throws DomainExceeded if t +- h leaves
/// the path domain.
VelocityFields velocity_fields(const MotionPath& path, double t, double h = 0.0);

/// Central-difference rate of a tensor-valued function of time.
Tensor3 central_rate(const std::function<Tensor3(double)>& f, double t, double h);

}  // namespace corostab
