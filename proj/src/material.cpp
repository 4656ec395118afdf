#include "corostab/material.hpp"

#include <array>
#include <memory>
#include <cmath>
#include <sstream>

#include "corostab/errors.hpp"

namespace corostab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_hencky_range(double mu, double lam, std::vector<std::string>& warnings) {
  if (!(mu > 0.0)) warnings.push_back("mu = " + fmt(mu) + " is not positive");
  if (!(2.0 * mu + 3.0 * lam > 0.0)) warnings.push_back("2 mu + 3 lam = " + fmt(2.0 * mu + 3.0 * lam) + " is not positive");
}

double step_for(double xi, double rel) { return rel * std::max(1.0, std::abs(xi)); }

Vector3 green_lagrange_from_log(const Vector3& x) {
  return 0.5 * ((2.0 * x).array().exp() - 1.0).matrix();
}

}  // namespace

bool is_hyperelastic(const MaterialLaw& law) { return std::holds_alternative<HyperelasticLaw>(law); }

const std::string& law_name(const MaterialLaw& law) {
  return std::visit([](const auto& l) -> const std::string& { return l.name; }, law);
}

const std::vector<std::string>& law_warnings(const MaterialLaw& law) {
  return std::visit([](const auto& l) -> const std::vector<std::string>& { return l.warnings; }, law);
}

Vector3 principal_kirchhoff(const MaterialLaw& law, const Vector3& x) {
  return std::visit(overloaded{[&](const HyperelasticLaw& l) { return l.gradient(x); },
                               [&](const CauchyElasticLaw& l) { return l.kirchhoff(x); }},
                    law);
}

Tensor3 kirchhoff_jacobian(const MaterialLaw& law, const Vector3& x) {
  return std::visit(overloaded{[&](const HyperelasticLaw& l) { return l.hessian(x); },
                               [&](const CauchyElasticLaw& l) { return l.jacobian(x); }},
                    law);
}

HyperelasticLaw hencky_law(double mu, double lam) {
  HyperelasticLaw law;
  law.name = "hencky";
  law.parameters = {{"mu", mu}, {"lam", lam}};
  law.energy = [=](const Vector3& x) {
    const double s = x.sum();
    return mu * x.squaredNorm() + 0.5 * lam * s * s;
  };
  law.gradient = [=](const Vector3& x) { return Vector3(2.0 * mu * x + Vector3::Constant(lam * x.sum())); };
  law.hessian = [=](const Vector3&) {
    return Tensor3(2.0 * mu * Tensor3::Identity() + Tensor3::Constant(lam));
  };
  check_hencky_range(mu, lam, law.warnings);
  return law;
}

HyperelasticLaw exp_hencky_law(double mu, double lam, double k, double khat) {
  HyperelasticLaw law;
  law.name = "exp-hencky";
  law.parameters = {{"mu", mu}, {"lam", lam}, {"k", k}, {"khat", khat}};
  law.energy = [=](const Vector3& x) {
    const double s = x.sum();
    return mu / k * std::exp(k * x.squaredNorm()) + lam / (2.0 * khat) * std::exp(khat * s * s);
  };
  law.gradient = [=](const Vector3& x) {
    const double s = x.sum();
    return Vector3(2.0 * mu * std::exp(k * x.squaredNorm()) * x +
                   Vector3::Constant(lam * s * std::exp(khat * s * s)));
  };
  law.hessian = [=](const Vector3& x) {
    const double s = x.sum();
    const double dev = 2.0 * mu * std::exp(k * x.squaredNorm());
    const double vol = lam * std::exp(khat * s * s) * (1.0 + 2.0 * khat * s * s);
    return Tensor3(dev * (Tensor3::Identity() + 2.0 * k * x * x.transpose()) + Tensor3::Constant(vol));
  };
  check_hencky_range(mu, lam, law.warnings);
  if (!(k > 0.0)) law.warnings.push_back("k = " + fmt(k) + " is not positive");
  if (!(khat > 0.0)) law.warnings.push_back("khat = " + fmt(khat) + " is not positive");
  return law;
}

CauchyElasticLaw cauchy_nonhyper_law(double mu, double lam, double d) {
  CauchyElasticLaw law;
  law.name = "cauchy-nonhyper";
  law.parameters = {{"mu", mu}, {"lam", lam}, {"d", d}};
  law.kirchhoff = [=](const Vector3& x) {
    const double s = x.sum();
    return Vector3((2.0 * mu + d * s) * x + Vector3::Constant(lam * s));
  };
  law.jacobian = [=](const Vector3& x) {
    const double s = x.sum();
    return Tensor3((2.0 * mu + d * s) * Tensor3::Identity() + Tensor3::Constant(lam) +
                   d * x * Vector3::Ones().transpose());
  };
  if (!(mu > 0.0)) law.warnings.push_back("mu = " + fmt(mu) + " is not positive");
  return law;
}

Vector3 invariants_from_stretches(const Vector3& stretches) {
  const Vector3 c = stretches.cwiseProduct(stretches);
  return Vector3(c.sum(), c(0) * c(1) + c(1) * c(2) + c(0) * c(2), c.prod());
}

namespace {

Vector3 kirchhoff_from_gamma(const GammaCoefficients& gamma, const Vector3& x) {
  const Vector3 c = (2.0 * x).array().exp();
  const Vector3 g = gamma(Vector3(c.sum(), c(0) * c(1) + c(1) * c(2) + c(0) * c(2), c.prod()));
  Vector3 tau;
  for (int j = 0; j < 3; ++j) tau(j) = c(j) * (g(0) + g(1) * c(j) + g(2) * c(j) * c(j));
  return tau;
}

}  // namespace

CauchyElasticLaw neo_hookean_gamma_law(double mu, double lam) {
  CauchyElasticLaw law;
  law.name = "neo-hookean";
  law.parameters = {{"mu", mu}, {"lam", lam}};
  law.kirchhoff = [=](const Vector3& x) {
    return Vector3(mu * ((2.0 * x).array().exp() - 1.0).matrix() + Vector3::Constant(lam * x.sum()));
  };
  law.jacobian = [=](const Vector3& x) {
    Tensor3 jac = Tensor3::Constant(lam);
    for (int i = 0; i < 3; ++i) jac(i, i) += 2.0 * mu * std::exp(2.0 * x(i));
    return jac;
  };
  // C^-1 = (C^2 - I1 C + I2 1) / I3.
  law.gamma = [=](const Vector3& inv) {
    const double a = lam * 0.5 * std::log(inv(2)) - mu;
    return Vector3(mu + a * inv(1) / inv(2), -a * inv(0) / inv(2), a / inv(2));
  };
  return law;
}

CauchyElasticLaw gamma_law(std::string name, GammaCoefficients gamma, ParameterMap parameters) {
  CauchyElasticLaw law;
  law.name = std::move(name);
  law.parameters = std::move(parameters);
  law.gamma = gamma;
  law.kirchhoff = [gamma](const Vector3& x) { return kirchhoff_from_gamma(gamma, x); };
  law.jacobian = [gamma](const Vector3& x) {
    return fd_jacobian([&](const Vector3& y) { return kirchhoff_from_gamma(gamma, y); }, x);
  };
  law.analytic_derivatives = false;
  return law;
}

Vector3 gamma_to_principal_s2(const CauchyElasticLaw& law, const Vector3& stretches) {
  if (!law.gamma) throw Error("law '" + law.name + "' has no gamma representation");
  const Vector3 c = stretches.cwiseProduct(stretches);
  const Vector3 g = (*law.gamma)(invariants_from_stretches(stretches));
  Vector3 s;
  for (int j = 0; j < 3; ++j) s(j) = g(0) + g(1) * c(j) + g(2) * c(j) * c(j);
  return s;
}

Vector3 fd_gradient(const ScalarField& f, const Vector3& x, double rel_step) {
  Vector3 g;
  for (int i = 0; i < 3; ++i) {
    const double h = step_for(x(i), rel_step);
    Vector3 xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Tensor3 fd_jacobian(const VectorField& f, const Vector3& x, double rel_step) {
  Tensor3 jac;
  for (int j = 0; j < 3; ++j) {
    const double h = step_for(x(j), rel_step);
    Vector3 xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return jac;
}

Tensor3 fd_hessian(const ScalarField& f, const Vector3& x, double rel_step) {
  Tensor3 hes;
  Vector3 h;
  for (int i = 0; i < 3; ++i) h(i) = step_for(x(i), rel_step);
  const double f0 = f(x);
  for (int i = 0; i < 3; ++i) {
    Vector3 xp = x, xm = x;
    xp(i) += h(i);
    xm(i) -= h(i);
    hes(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h(i) * h(i));
    for (int j = i + 1; j < 3; ++j) {
      auto at = [&](double si, double sj) {
        Vector3 y = x;
        y(i) += si * h(i);
        y(j) += sj * h(j);
        return f(y);
      };
      hes(i, j) = hes(j, i) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h(i) * h(j));
    }
  }
  return hes;
}

// ---------------------------------------------------------------------------
// Configuration-driven construction

namespace {

constexpr std::array<std::pair<MaterialKind, const char*>, 6> kKindNames{{
    {MaterialKind::Hencky, "hencky"},
    {MaterialKind::ExpHencky, "exp-hencky"},
    {MaterialKind::CauchyNonhyper, "cauchy-nonhyper"},
    {MaterialKind::CustomEnergy, "custom-energy"},
    {MaterialKind::CustomStress, "custom-stress"},
    {MaterialKind::CustomGamma, "custom-gamma"},
}};

constexpr int kEquivarianceSamples = 50;
constexpr std::uint64_t kEquivarianceSeed = 20240607;

const std::string& require_expression(const MaterialConfig& config, const std::string& key) {
  const auto it = config.expressions.find(key);
  if (it == config.expressions.end()) {
    throw SchemaError("material kind " + to_string(config.kind) + " requires expression '" + key + "'");
  }
  return it->second;
}

double require_parameter(const MaterialConfig& config, const char* key) {
  const auto it = config.parameters.find(key);
  if (it == config.parameters.end()) {
    throw SchemaError("material kind " + to_string(config.kind) + " requires parameter '" + key + "'");
  }
  return it->second;
}

void require_equivariant(const VectorField& f, const std::string& what) {
  const EquivarianceVerdict v = check_permutation_equivariance(f, kEquivarianceSamples, kEquivarianceSeed);
  if (!v.equivariant) {
    const auto& w = *v.witness;
    std::ostringstream os;
    os << what << " is not permutation-equivariant: at x = (" << w.x(0) << ", " << w.x(1) << ", " << w.x(2)
       << ") under permutation (" << w.permutation[0] + 1 << w.permutation[1] + 1 << w.permutation[2] + 1
       << ") component " << w.component + 1 << " maps " << w.expected << " to " << w.actual;
    throw EquivarianceError(os.str());
  }
}

std::array<ExprAst, 3> stress_components(const MaterialConfig& config) {
  std::array<std::string, 3> sources;
  if (const auto it = config.expressions.find("stress"); it != config.expressions.end()) {
    for (int i = 0; i < 3; ++i) sources[i] = expand_component_template(it->second, i + 1);
  } else {
    for (int i = 0; i < 3; ++i) sources[i] = require_expression(config, "stress" + std::to_string(i + 1));
  }
  return {parse_expression(sources[0]).bind(config.parameters), parse_expression(sources[1]).bind(config.parameters),
          parse_expression(sources[2]).bind(config.parameters)};
}

}  // namespace

std::string to_string(MaterialKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<MaterialKind> material_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (text == name) return k;
  }
  return std::nullopt;
}

MaterialLaw law_from_expressions(const MaterialConfig& config) {
  const bool green = config.variables == VariableSpace::GreenLagrange;
  const std::string name = config.name.empty() ? to_string(config.kind) : config.name;

  switch (config.kind) {
    case MaterialKind::CustomEnergy: {
      const auto expr = std::make_shared<const ExprAst>(
          parse_expression(require_expression(config, "energy")).bind(config.parameters));
      HyperelasticLaw law;
      law.name = name;
      law.parameters = config.parameters;
      law.analytic_derivatives = false;
      if (green) {
        law.energy = [expr](const Vector3& x) { return expr->evaluate(green_lagrange_from_log(x)); };
      } else {
        law.energy = [expr](const Vector3& x) { return expr->evaluate(x); };
      }
      const ScalarField energy = law.energy;
      law.gradient = [energy](const Vector3& x) { return fd_gradient(energy, x); };
      law.hessian = [energy](const Vector3& x) { return fd_hessian(energy, x); };
      require_equivariant(law.gradient, "energy gradient");
      return law;
    }
    case MaterialKind::CustomStress: {
      const auto comps = std::make_shared<const std::array<ExprAst, 3>>(stress_components(config));
      CauchyElasticLaw law;
      law.name = name;
      law.parameters = config.parameters;
      law.analytic_derivatives = false;
      if (green) {
        // Components are principal second Piola-Kirchhoff stresses s_i(e).
        law.kirchhoff = [comps](const Vector3& x) {
          const Vector3 e = green_lagrange_from_log(x);
          Vector3 tau;
          for (int i = 0; i < 3; ++i) tau(i) = std::exp(2.0 * x(i)) * (*comps)[i].evaluate(e);
          return tau;
        };
      } else {
        law.kirchhoff = [comps](const Vector3& x) {
          return Vector3((*comps)[0].evaluate(x), (*comps)[1].evaluate(x), (*comps)[2].evaluate(x));
        };
      }
      const VectorField tau = law.kirchhoff;
      law.jacobian = [tau](const Vector3& x) { return fd_jacobian(tau, x); };
      require_equivariant(law.kirchhoff, "principal stress");
      return law;
    }
    case MaterialKind::CustomGamma: {
      auto g = std::make_shared<const std::array<ExprAst, 3>>(std::array<ExprAst, 3>{
          parse_expression(require_expression(config, "gamma0")).bind(config.parameters),
          parse_expression(require_expression(config, "gamma1")).bind(config.parameters),
          parse_expression(require_expression(config, "gamma2")).bind(config.parameters)});
      CauchyElasticLaw law = gamma_law(
          name, [g](const Vector3& inv) {
            return Vector3((*g)[0].evaluate(inv), (*g)[1].evaluate(inv), (*g)[2].evaluate(inv));
          },
          config.parameters);
      require_equivariant(law.kirchhoff, "gamma-derived principal stress");
      return law;
    }
    default:
      throw SchemaError("material kind " + to_string(config.kind) + " is not expression-defined");
  }
}

MaterialLaw law_from_config(const MaterialConfig& config) {
  switch (config.kind) {
    case MaterialKind::Hencky:
      return hencky_law(require_parameter(config, "mu"), require_parameter(config, "lam"));
    case MaterialKind::ExpHencky:
      return exp_hencky_law(require_parameter(config, "mu"), require_parameter(config, "lam"),
                            require_parameter(config, "k"), require_parameter(config, "khat"));
    case MaterialKind::CauchyNonhyper:
      return cauchy_nonhyper_law(require_parameter(config, "mu"), require_parameter(config, "lam"),
                                 require_parameter(config, "d"));
    default:
      return law_from_expressions(config);
  }
}

}  // namespace corostab
