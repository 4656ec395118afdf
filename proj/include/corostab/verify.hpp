#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corostab/material.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      ///< worst residual (or count, for counting checks)
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Scalar in front of Q_tau(Edot) in <D^ZJ tau, D> = factor * Q_tau(Edot).
enum class KirchhoffFactor { One, InverseJ };
const char* to_string(KirchhoffFactor f);

struct KirchhoffResolution {
  KirchhoffFactor factor = KirchhoffFactor::One;
  double residual_one = 0.0;        ///< max relative residual assuming factor 1
  double residual_inverse_j = 0.0;  ///< same assuming 1/J
  std::size_t samples = 0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240607;
  std::string suite = "all";  ///< all | zj | quadform | monotonicity | gamma
  int samples = 100;          ///< random states per law in the identity checks
  bool mutate_q2_sign = false;  ///< flips the off-diagonal block, for the mutation test
};

struct VerifySummary {
  std::vector<SuiteResult> suites;
  std::optional<KirchhoffResolution> kirchhoff;
  bool passed() const;
};

const std::vector<std::string>& verify_suite_names();

/// Throws Error on an unknown suite name.
VerifySummary run_verify(const VerifyOptions& options = {});

/// Random state plus a smooth path through it at t = 0.
struct IdentitySample {
  Vector3 x;
  SmoothPathSpec path;
};

/// Log-stretches uniform in [-box, box]^3, unit-scale rates.
std::vector<IdentitySample> identity_samples(std::uint64_t seed, int count, double box = 0.7);

/// Both sides of the rate identities at one sample.
struct IdentityValues {
  double J = 1.0;
  double pairing_sigma = 0.0;  ///< <D^ZJ sigma, D>
  double pairing_tau = 0.0;    ///< <D^ZJ tau, D>
  double q_sigma = 0.0;        ///< Q(Edot), Edot = F^T D F
  double q_tau = 0.0;          ///< Q_tau(Edot)
};

IdentityValues identity_values(const MaterialLaw& law, const IdentitySample& sample, bool mutate_q2_sign = false);

/// |a - b| / (1 + |b|).
double relative_residual(double a, double b);

}  // namespace corostab
