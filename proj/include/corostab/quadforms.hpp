#pragma once

#include <array>

#include "corostab/material.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

enum class StressFlavor { Cauchy, Kirchhoff };
enum class LawFlavor { Hyperelastic, CauchyElastic };

const char* to_string(StressFlavor flavor);

/// Lambda = sym d f / d x at a log-stretch point, with f the principal
/// Cauchy (sigma_i = tau_i e^-s) or Kirchhoff stresses.
struct LambdaMatrix {
  Vector3 x;
  StressFlavor flavor = StressFlavor::Cauchy;
  Tensor3 jacobian;  ///< unsymmetrized d f_i / d x_j
  Tensor3 matrix;    ///< symmetric part
  Vector3 eigenvalues;
  double min_eigenvalue = 0.0;
};

LambdaMatrix lambda_matrix(const MaterialLaw& law, const Vector3& x, StressFlavor flavor);

/// |J - J^T| (Frobenius) of the unsymmetrized Kirchhoff Jacobian.
double jacobian_asymmetry(const MaterialLaw& law, const Vector3& x);

/// Quadratic form split into the block acting on the diagonal components
/// (E11, E22, E33) of Edot in the Lagrangian frame and one coefficient per
/// off-diagonal pair, ordered (23, 13, 12). The form value is
///   v^T q1 v + sum_{i != j} q2_ij Edot_ij^2.
struct QuadFormBlocks {
  Tensor3 q1;      ///< as assembled
  Tensor3 q1_sym;  ///< symmetric part, used for eigen-analysis
  Vector3 q2;
  StressFlavor stress_flavor = StressFlavor::Cauchy;
  LawFlavor law_flavor = LawFlavor::Hyperelastic;
  double J = 1.0;
  Vector3 stretches = Vector3::Ones();

  Vector3 q1_eigenvalues() const;
  /// blockdiag(q1_sym, diag(q2)) in the orthonormal basis of Sym(3)
  /// returned by sym_basis().
  Matrix6 six_by_six() const;
};

/// Pairs of the off-diagonal slots, in the order of QuadFormBlocks::q2.
inline constexpr int kPairs[3][2] = {{1, 2}, {0, 2}, {0, 1}};

/// Orthonormal basis of Sym(3): e_i (x) e_i, then (e_j (x) e_k + e_k (x) e_j)/sqrt2
/// for (j,k) in kPairs order.
const std::array<Tensor3, 6>& sym_basis();
Vector6 to_sym_coordinates(const Tensor3& s);
Tensor3 from_sym_coordinates(const Vector6& v);

/// Hyperelastic blocks from derivatives of W(e): Cauchy flavor unless
/// `flavor` says otherwise.
QuadFormBlocks qhyp_blocks(const HyperelasticLaw& law, const DeformationState& state,
                           StressFlavor flavor = StressFlavor::Cauchy);
/// Cauchy-elastic blocks from derivatives of s(e).
QuadFormBlocks qela_blocks(const CauchyElasticLaw& law, const DeformationState& state,
                           StressFlavor flavor = StressFlavor::Cauchy);
/// Kirchhoff-flavor blocks for either law type.
QuadFormBlocks qtau_blocks(const MaterialLaw& law, const DeformationState& state);
/// Dispatches on the law type.
QuadFormBlocks quad_form_blocks(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor);

/// Q1 through the weighted Lambda matrix:
///   Cauchy: J W Lambda_sigma W,  Kirchhoff: W Lambda_tau W,  W = diag(lambda_i^-2).
Tensor3 q1_lambda_route(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor);

/// Coefficient (tau_i - tau_j)/(lambda_i^2 - lambda_j^2) (lambda_i^-2 + lambda_j^-2).
/// Below the degeneracy threshold the divided difference is taken across a
/// symmetric split of the pair in log-stretch space.
double q2_coefficient(const MaterialLaw& law, const Vector3& x, int i, int j);

/// Relative gap below which a stretch pair counts as degenerate.
inline constexpr double kDegenerateGap = 1e-7;

/// Block evaluation on Edot components in the Lagrangian frame.
double full_form_value(const QuadFormBlocks& blocks, const Tensor3& edot_components);

/// Direct tensorial evaluation
///   <S2dot, Edot> + 2 tr(C^-1 Edot S2 Edot) [- <C^-1, Edot><S2, Edot>]
/// (the last term only for the Cauchy flavor), with S2dot by central
/// differences of S2 along C + 2 eps Edot. `edot` is in the reference frame.
double tensorial_form_value(const MaterialLaw& law, const DeformationState& state, const SymmetricTensor3& edot,
                            StressFlavor flavor, double h = 1e-5);

/// 6x6 matrix of the tensorial form in the Lagrangian-frame sym_basis(),
/// assembled by polarization.
Matrix6 brute_force_six_by_six(const MaterialLaw& law, const DeformationState& state, StressFlavor flavor);

}  // namespace corostab
