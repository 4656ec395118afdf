#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corostab/expression.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

using ScalarField = std::function<double(const Vector3&)>;
using VectorField = std::function<Vector3(const Vector3&)>;
using MatrixField = std::function<Tensor3(const Vector3&)>;

/// Isotropic hyperelastic law given by an energy of the log-stretches
/// x_i = log lambda_i. The gradient is the principal Kirchhoff stress
/// (tau_i = dW/dx_i) and the Hessian its Jacobian.
struct HyperelasticLaw {
  std::string name;
  ParameterMap parameters;
  ScalarField energy;
  VectorField gradient;
  MatrixField hessian;
  bool analytic_derivatives = true;
  std::vector<std::string> warnings;
};

/// Coefficients (g0, g1, g2) of S2 = g0 1 + g1 C + g2 C^2 as functions of
/// the invariants (I1, I2, I3) of C.
using GammaCoefficients = std::function<Vector3(const Vector3& invariants)>;

/// Isotropic Cauchy-elastic law given directly by principal Kirchhoff
/// stresses tau_i(x); no energy is assumed, so the Jacobian need not be
/// symmetric.
struct CauchyElasticLaw {
  std::string name;
  ParameterMap parameters;
  VectorField kirchhoff;
  MatrixField jacobian;  ///< d tau_i / d x_j
  std::optional<GammaCoefficients> gamma;
  bool analytic_derivatives = true;
  std::vector<std::string> warnings;
};

using MaterialLaw = std::variant<HyperelasticLaw, CauchyElasticLaw>;

bool is_hyperelastic(const MaterialLaw& law);
const std::string& law_name(const MaterialLaw& law);
const std::vector<std::string>& law_warnings(const MaterialLaw& law);

/// Principal Kirchhoff stresses tau_i(x).
Vector3 principal_kirchhoff(const MaterialLaw& law, const Vector3& x);
/// Unsymmetrized Jacobian d tau_i / d x_j.
Tensor3 kirchhoff_jacobian(const MaterialLaw& law, const Vector3& x);

// Built-in laws. Parameters outside the admissible range are accepted and
// recorded in `warnings`.

/// W = mu |x|^2 + lam/2 s^2.
HyperelasticLaw hencky_law(double mu, double lam);
/// W = mu/k exp(k |x|^2) + lam/(2 khat) exp(khat s^2).
HyperelasticLaw exp_hencky_law(double mu, double lam, double k, double khat);
/// tau_i = 2 mu x_i + lam s + d x_i s.
CauchyElasticLaw cauchy_nonhyper_law(double mu, double lam, double d);
/// Compressible neo-Hooke S2 = mu (1 - C^-1) + lam log J C^-1, carrying both
/// the closed-form principal stresses and the gamma form obtained from
/// Cayley-Hamilton. Used to cross-check the two representations.
CauchyElasticLaw neo_hookean_gamma_law(double mu, double lam);
/// Law defined only through gamma coefficients.
CauchyElasticLaw gamma_law(std::string name, GammaCoefficients gamma, ParameterMap parameters = {});

/// Invariants (tr C, tr cof C, det C) from principal stretches.
Vector3 invariants_from_stretches(const Vector3& stretches);

/// s_j = g0 + g1 lambda_j^2 + g2 lambda_j^4 at the state's invariants.
/// Throws Error if the law has no gamma form.
Vector3 gamma_to_principal_s2(const CauchyElasticLaw& law, const Vector3& stretches);

// Finite-difference derivative providers.

/// Central differences with step rel_step * max(1, |x_i|).
Vector3 fd_gradient(const ScalarField& f, const Vector3& x, double rel_step = 1e-6);
/// Central differences of a vector field, column j = d f / d x_j.
Tensor3 fd_jacobian(const VectorField& f, const Vector3& x, double rel_step = 1e-6);
/// Nested central differences (four-point cross stencil), symmetric by construction.
Tensor3 fd_hessian(const ScalarField& f, const Vector3& x, double rel_step = 1e-4);

enum class MaterialKind { Hencky, ExpHencky, CauchyNonhyper, CustomEnergy, CustomStress, CustomGamma };
enum class VariableSpace { LogStretch, GreenLagrange };

std::string to_string(MaterialKind kind);
std::optional<MaterialKind> material_kind_from_string(std::string_view text);

/// Declarative description of a law, as read from a material file.
///
/// Expression keys: `energy` (custom-energy); `stress` template with {i}
/// or `stress1..3` (custom-stress); `gamma0..2` (custom-gamma, where x1, x2,
/// x3 denote the invariants I1, I2, I3 of C). For custom-energy and
/// custom-stress, `variables` selects whether x1..x3 are log-stretches or
/// Green-Lagrange eigenvalues e_i; in the latter case `stress` gives the
/// principal second Piola-Kirchhoff stresses.
struct MaterialConfig {
  MaterialKind kind = MaterialKind::Hencky;
  std::string name;
  ParameterMap parameters;
  VariableSpace variables = VariableSpace::LogStretch;
  std::map<std::string, std::string> expressions;
};

/// Builds a custom law. Throws LexError/ParseError for bad expressions,
/// EvalError for unbound parameters and EquivarianceError when the principal
/// stresses are not permutation-equivariant.
MaterialLaw law_from_expressions(const MaterialConfig& config);

/// Any kind, built-in or custom. Missing built-in parameters throw SchemaError.
MaterialLaw law_from_config(const MaterialConfig& config);

}  // namespace corostab
