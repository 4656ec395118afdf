#include "corostab/quadforms.hpp"

#include <cmath>
#include <numbers>

#include "corostab/errors.hpp"
#include "corostab/stress.hpp"

namespace corostab {

namespace {

struct Principal {
  Vector3 x;
  Vector3 lam2;  // lambda_i^2
  Vector3 tau;
  Tensor3 jac;  // d tau_i / d x_j
};

Principal principal_data(const VectorField& tau_fn, const MatrixField& jac_fn, const Vector3& x) {
  Principal p;
  p.x = x;
  p.lam2 = (2.0 * x).array().exp();
  p.tau = tau_fn(x);
  p.jac = jac_fn(x);
  return p;
}

double q2_core(const VectorField& tau_fn, const Vector3& x, int i, int j) {
  const double a = std::exp(2.0 * x(i));
  const double b = std::exp(2.0 * x(j));
  const double weight = 1.0 / a + 1.0 / b;
  if (std::abs(a - b) >= kDegenerateGap * std::max(a, b)) {
    const Vector3 tau = tau_fn(x);
    return (tau(i) - tau(j)) / (a - b) * weight;
  }
  // Split the pair symmetrically about its midpoint and difference there;
  // one Richardson step removes the O(h^2) term.
  const double mid = 0.5 * (x(i) + x(j));
  auto split = [&](double h) {
    Vector3 y = x;
    y(i) = mid + h;
    y(j) = mid - h;
    const Vector3 tau = tau_fn(y);
    return (tau(i) - tau(j)) / (std::exp(2.0 * y(i)) - std::exp(2.0 * y(j)));
  };
  const double h = 1e-4 * std::max(1.0, std::abs(mid));
  return (4.0 * split(h) - split(2.0 * h)) / 3.0 * weight;
}

QuadFormBlocks assemble(const VectorField& tau_fn, const Principal& p, const DeformationState& state,
                        StressFlavor stress_flavor, LawFlavor law_flavor) {
  // s_i = tau_i / lambda_i^2 and ds_i/de_j = (Jtau_ij - 2 delta_ij tau_i) / (lambda_i^2 lambda_j^2).
  Vector3 s;
  Tensor3 ds;
  for (int i = 0; i < 3; ++i) {
    s(i) = p.tau(i) / p.lam2(i);
    for (int j = 0; j < 3; ++j) {
      ds(i, j) = (p.jac(i, j) - (i == j ? 2.0 * p.tau(i) : 0.0)) / (p.lam2(i) * p.lam2(j));
    }
  }

  QuadFormBlocks b;
  b.stress_flavor = stress_flavor;
  b.law_flavor = law_flavor;
  b.J = state.J;
  b.stretches = state.stretches;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (stress_flavor == StressFlavor::Cauchy) {
        b.q1(i, j) = i == j ? ds(i, i) + s(i) / p.lam2(i)
                            : ds(j, i) - 0.5 * (s(j) / p.lam2(i) + s(i) / p.lam2(j));
      } else {
        b.q1(i, j) = i == j ? ds(i, i) + 2.0 * s(i) / p.lam2(i) : ds(i, j);
      }
    }
  }
  b.q1_sym = sym(b.q1);
  for (int k = 0; k < 3; ++k) b.q2(k) = q2_core(tau_fn, p.x, kPairs[k][0], kPairs[k][1]);
  return b;
}

VectorField kirchhoff_field(const MaterialLaw& law) {
  return [&law](const Vector3& x) { return principal_kirchhoff(law, x); };
}

}  // namespace

const char* to_string(StressFlavor flavor) { return flavor == StressFlavor::Cauchy ? "sigma" : "tau"; }

LambdaMatrix lambda_matrix(const MaterialLaw& law, const Vector3& x, StressFlavor flavor) {
  LambdaMatrix m;
  m.x = x;
  m.flavor = flavor;
  const Tensor3 jac = kirchhoff_jacobian(law, x);
  if (flavor == StressFlavor::Kirchhoff) {
    m.jacobian = jac;
  } else {
    // d sigma_i / d x_j = e^-s (d tau_i / d x_j - tau_i)
    const Vector3 tau = principal_kirchhoff(law, x);
    m.jacobian = std::exp(-x.sum()) * (jac - tau * Vector3::Ones().transpose());
  }
  m.matrix = sym(m.jacobian);
  m.eigenvalues = Eigen::SelfAdjointEigenSolver<Tensor3>(m.matrix, Eigen::EigenvaluesOnly).eigenvalues();
  m.min_eigenvalue = m.eigenvalues(0);
  return m;
}

double jacobian_asymmetry(const MaterialLaw& law, const Vector3& x) {
  const Tensor3 jac = kirchhoff_jacobian(law, x);
  return (jac - jac.transpose()).norm();
}

Vector3 QuadFormBlocks::q1_eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<Tensor3>(q1_sym, Eigen::EigenvaluesOnly).eigenvalues();
}

Matrix6 QuadFormBlocks::six_by_six() const {
  Matrix6 m = Matrix6::Zero();
  m.topLeftCorner<3, 3>() = q1_sym;
  for (int k = 0; k < 3; ++k) m(3 + k, 3 + k) = q2(k);
  return m;
}

const std::array<Tensor3, 6>& sym_basis() {
  static const std::array<Tensor3, 6> basis = [] {
    std::array<Tensor3, 6> out;
    for (int i = 0; i < 3; ++i) {
      out[i] = Tensor3::Zero();
      out[i](i, i) = 1.0;
    }
    for (int k = 0; k < 3; ++k) {
      out[3 + k] = Tensor3::Zero();
      out[3 + k](kPairs[k][0], kPairs[k][1]) = out[3 + k](kPairs[k][1], kPairs[k][0]) = std::numbers::sqrt2 / 2.0;
    }
    return out;
  }();
  return basis;
}

Vector6 to_sym_coordinates(const Tensor3& s) {
  Vector6 v;
  for (int k = 0; k < 6; ++k) v(k) = frobenius(sym_basis()[k], s);
  return v;
}

Tensor3 from_sym_coordinates(const Vector6& v) {
  Tensor3 s = Tensor3::Zero();
  for (int k = 0; k < 6; ++k) s += v(k) * sym_basis()[k];
  return s;
}

QuadFormBlocks qhyp_blocks(const HyperelasticLaw& law, const DeformationState& state, StressFlavor flavor) {
  const Principal p = principal_data(law.gradient, law.hessian, state.log_stretches);
  return assemble(law.gradient, p, state, flavor, LawFlavor::Hyperelastic);
}

QuadFormBlocks qela_blocks(const CauchyElasticLaw& law, const DeformationState& state, StressFlavor flavor) {
  const Principal p = principal_data(law.kirchhoff, law.jacobian, state.log_stretches);
  return assemble(law.kirchhoff, p, state, flavor, LawFlavor::CauchyElastic);
}

QuadFormBlocks quad_form_blocks(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor) {
  return std::visit(
      [&](const auto& l) {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, HyperelasticLaw>) {
          return qhyp_blocks(l, state, flavor);
        } else {
          return qela_blocks(l, state, flavor);
        }
      },
      law);
}

QuadFormBlocks qtau_blocks(const MaterialLaw& law, const DeformationState& state) {
  return quad_form_blocks(law, state, StressFlavor::Kirchhoff);
}

Tensor3 q1_lambda_route(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor) {
  const LambdaMatrix lm = lambda_matrix(law, state.log_stretches, flavor);
  const Vector3 w = (-2.0 * state.log_stretches).array().exp();
  const Tensor3 weighted = w.asDiagonal() * lm.matrix * w.asDiagonal();
  return flavor == StressFlavor::Cauchy ? Tensor3(state.J * weighted) : weighted;
}

double q2_coefficient(const MaterialLaw& law, const Vector3& x, int i, int j) {
  return q2_core(kirchhoff_field(law), x, i, j);
}

double full_form_value(const QuadFormBlocks& blocks, const Tensor3& e) {
  const Vector3 v = e.diagonal();
  double value = v.dot(blocks.q1 * v);
  for (int k = 0; k < 3; ++k) {
    const double c = e(kPairs[k][0], kPairs[k][1]);
    value += 2.0 * blocks.q2(k) * c * c;
  }
  return value;
}

double tensorial_form_value(const MaterialLaw& law, const DeformationState& state, const SymmetricTensor3& edot,
                            StressFlavor flavor, double h) {
  const double scale = edot.norm();
  if (scale == 0.0) return 0.0;
  const Tensor3 dir = edot.matrix() / scale;
  auto s2_at = [&](double eps) {
    const SymmetricTensor3 c(state.C.matrix() + 2.0 * eps * dir);
    return second_pk(law, strain_measures(sqrt_spd(c).matrix())).matrix();
  };
  const Tensor3 s2dot = scale * (s2_at(h) - s2_at(-h)) / (2.0 * h);
  const Tensor3 s2 = second_pk(law, state).matrix();
  const Tensor3 cinv = state.C.matrix().inverse();
  const Tensor3& e = edot.matrix();
  double value = frobenius(s2dot, e) + 2.0 * (cinv * e * s2 * e).trace();
  if (flavor == StressFlavor::Cauchy) value -= frobenius(cinv, e) * frobenius(s2, e);
  return value;
}

Matrix6 brute_force_six_by_six(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor) {
  const Tensor3& u = state.spectral.vectors;
  auto q = [&](const Tensor3& local) {
    return tensorial_form_value(law, state, SymmetricTensor3(u * local * u.transpose()), flavor);
  };
  const auto& basis = sym_basis();
  Matrix6 m;
  for (int k = 0; k < 6; ++k) {
    m(k, k) = q(basis[k]);
    for (int l = 0; l < k; ++l) {
      m(k, l) = m(l, k) = 0.25 * (q(basis[k] + basis[l]) - q(basis[k] - basis[l]));
    }
  }
  return m;
}

}  // namespace corostab
