#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "corostab/material.hpp"
#include "corostab/quadforms.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

/// Tensor map induced by a permutation-symmetric vector function:
/// Sigma_f(S) = sum_i f_i(spectrum of S) v^i (x) v^i.
struct InducedIsotropicMap {
  VectorField f;
  SymmetricTensor3 operator()(const SymmetricTensor3& s) const;
};

/// f = principal sigma (tau e^-s) or principal tau as functions of x.
InducedIsotropicMap induced_stress_map(const MaterialLaw& law, StressFlavor flavor);
Vector3 principal_stress(const MaterialLaw& law, const Vector3& x, StressFlavor flavor);

struct DefinitenessCheck {
  double min_eigenvalue = 0.0;
  bool positive = false;
};

/// Lambda positive definite beyond tolerance_factor * |Lambda|.
DefinitenessCheck check_tstsm_pp(const MaterialLaw& law, const Vector3& x, StressFlavor flavor,
                                 double tolerance_factor = 1e-10);

struct BakerEricksenCheck {
  bool pass = true;
  /// Smallest (f_i - f_j)(lambda_i - lambda_j) over non-exempt pairs;
  /// empty when every pair is exempt.
  std::optional<double> margin;
  std::optional<std::array<int, 2>> worst_pair;
};

/// Pairs whose stretches agree to `exempt_gap` (relative) are skipped.
BakerEricksenCheck check_be(const Vector3& principal, const Vector3& stretches, double exempt_gap = 1e-12);

/// <Sigma_f(A) - Sigma_f(B), A - B> for A = Ra diag(xa) Ra^T, B = Rb diag(xb) Rb^T.
/// Throws Error if xa == xb.
double check_tstsm_pair(const MaterialLaw& law, const Vector3& xa, const Vector3& xb, StressFlavor flavor,
                        const Tensor3& frame_a = Tensor3::Identity(), const Tensor3& frame_b = Tensor3::Identity());

/// Gauss-Legendre nodes and weights on [0, 1].
struct Quadrature {
  std::vector<double> nodes, weights;
};
Quadrature gauss_legendre(int n);

/// integral_0^1 <Lambda(xb + t d) d, d> dt with d = xa - xb, which equals
/// the shared-frame pair product. Requires n_nodes >= 8 and xa != xb.
double line_integral_monotonicity(const MaterialLaw& law, const Vector3& xa, const Vector3& xb, int n_nodes,
                                  StressFlavor flavor);

/// CSP pairing <D^ZJ, D> as a quadratic form in D, in the orthonormal
/// sym_basis() of the spatial principal frame: P = M Q M (/J for sigma),
/// M = diag(lambda_i^2, lambda_2 lambda_3, lambda_1 lambda_3, lambda_1 lambda_2).
Matrix6 csp_matrix(const QuadFormBlocks& blocks);

/// Unit spatial axes n^i = F U^i / lambda_i as columns.
Tensor3 spatial_axes(const DeformationState& state);

/// <D^ZJ, D> at a spatial D through the quadratic-form route.
double csp_pairing_quadform(const QuadFormBlocks& blocks, const DeformationState& state, const SymmetricTensor3& d);

struct CspResult {
  double minimum = 0.0;          ///< sampled minimum
  SymmetricTensor3 argmin;       ///< spatial unit direction attaining it
  double exact_minimum = 0.0;    ///< min eigenvalue of csp_matrix
  double block_minimum = 0.0;    ///< min eigenvalue of the 6x6 block form
  int directions = 0;
};

/// Sampled minimum over n_directions GOE-normalized unit D, the 6 coordinate
/// directions and the minimizing eigenvector of csp_matrix.
CspResult csp_sampled(const MaterialLaw& law, const DeformationState& state, int n_directions, std::uint64_t seed,
                      StressFlavor flavor = StressFlavor::Cauchy);

enum class Verdict { Pass, Fail, Marginal };
const char* to_string(Verdict v);

struct AuditOptions {
  double margin = 1e-6;
  /// Lambda values within definiteness * |Lambda| of zero are also marginal.
  double definiteness = 1e-10;
  int n_directions = 200;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::vector<StressFlavor> flavors = {StressFlavor::Cauchy, StressFlavor::Kirchhoff};
};

struct FlavorRecord {
  StressFlavor flavor = StressFlavor::Cauchy;
  double lambda_min = 0.0;
  double csp_exact = 0.0;
  double csp_sampled = 0.0;
  double block_min = 0.0;
  Verdict lambda_verdict = Verdict::Marginal;
  Verdict csp_verdict = Verdict::Marginal;
  Verdict verdict = Verdict::Marginal;  ///< Pass/Fail when both agree, else Marginal
  bool consistent = true;               ///< signs agree or a value is marginal
  bool sampling_consistent = true;      ///< sampled minimum >= exact minimum
  bool implication_ok = true;           ///< Lambda pd => BE
};

struct StateRecord {
  std::size_t index = 0;
  Vector3 x;
  Vector3 stretches;
  double J = 1.0;
  Vector3 sigma, tau;
  BakerEricksenCheck be;
  std::vector<FlavorRecord> flavors;
};

struct FlavorSummary {
  StressFlavor flavor = StressFlavor::Cauchy;
  std::size_t pass = 0, fail = 0, marginal = 0;
  std::size_t inconsistent = 0, sampling_mismatches = 0, implication_violations = 0;
  std::optional<std::size_t> worst_state;  ///< smallest lambda_min
};

struct AuditReport {
  std::vector<StateRecord> records;
  std::vector<FlavorSummary> summaries;
  std::size_t be_failures = 0;
  bool consistent() const;
};

/// Cross-checks sign(min eig Lambda) against the exact CSP minimum at every
/// state (log-stretches), plus the BE implication. Records are ordered by
/// input index regardless of `jobs`.
AuditReport equivalence_audit(const MaterialLaw& law, const std::vector<Vector3>& states,
                              const AuditOptions& options = {});

}  // namespace corostab
