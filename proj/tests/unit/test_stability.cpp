#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "corostab/errors.hpp"
#include "corostab/random.hpp"
#include "corostab/stability.hpp"

using namespace corostab;

namespace {

const double e = std::numbers::e;

std::vector<Vector3> grid(int n, double lo, double hi) {
  std::vector<Vector3> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto at = [&](int m) { return lo + (hi - lo) * m / (n - 1); };
        out.emplace_back(at(i), at(j), at(k));
      }
  return out;
}

CauchyElasticLaw negative_identity_law() {
  CauchyElasticLaw law;
  law.name = "negative";
  law.kirchhoff = [](const Vector3& x) { return Vector3(-x); };
  law.jacobian = [](const Vector3&) { return Tensor3(-Tensor3::Identity()); };
  return law;
}

}  // namespace

TEST(InducedMap, CommutesWithRotations) {
  Rng rng(1);
  const InducedIsotropicMap map = induced_stress_map(cauchy_nonhyper_law(1, 1, 0.2), StressFlavor::Cauchy);
  for (int k = 0; k < 30; ++k) {
    const Tensor3 s = rng.goe().matrix();
    const Tensor3 q = rng.rotation();
    const Tensor3 lhs = map(SymmetricTensor3(Tensor3(q * s * q.transpose()))).matrix();
    const Tensor3 rhs = q * map(SymmetricTensor3(s)).matrix() * q.transpose();
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * (1 + rhs.norm()));
  }
}

TEST(InducedMap, DiagonalArgument) {
  const InducedIsotropicMap map = induced_stress_map(hencky_law(1, 1), StressFlavor::Kirchhoff);
  const Tensor3 out = map(SymmetricTensor3::diagonal(Vector3(1, 0, 0))).matrix();
  EXPECT_LE((out - Tensor3(Vector3(3, 1, 1).asDiagonal())).norm(), 1e-13);
}

TEST(TstsmPP, HenckyKirchhoffEverywhere) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const DefinitenessCheck c = check_tstsm_pp(hencky_law(1, 1), rng.uniform_vector(-2, 2), StressFlavor::Kirchhoff);
    EXPECT_TRUE(c.positive);
    EXPECT_NEAR(c.min_eigenvalue, 2, 1e-12);
  }
}

TEST(TstsmPP, NegativeBulkModulusFails) {
  const LambdaMatrix m = lambda_matrix(hencky_law(1, -1), Vector3(0.2, -0.1, 0.3), StressFlavor::Kirchhoff);
  EXPECT_LE((m.eigenvalues - Vector3(-1, 2, 2)).norm(), 1e-12);
  EXPECT_FALSE(check_tstsm_pp(hencky_law(1, -1), Vector3::Zero(), StressFlavor::Kirchhoff).positive);
}

TEST(TstsmPP, HenckyCauchyFailsInTension) {
  const MaterialLaw law = hencky_law(1, 1);
  EXPECT_TRUE(check_tstsm_pp(law, Vector3::Zero(), StressFlavor::Cauchy).positive);
  bool any_fail = false;
  for (double a : {0.5, 1.0, 1.5, 2.0}) any_fail |= !check_tstsm_pp(law, Vector3(a, a, a), StressFlavor::Cauchy).positive;
  EXPECT_TRUE(any_fail);
}

TEST(TstsmPP, KirchhoffLambdaIsEnergyHessian) {
  Rng rng(3);
  const HyperelasticLaw law = exp_hencky_law(1, 1, 1, 1);
  for (int k = 0; k < 20; ++k) {
    const Vector3 x = rng.uniform_vector(-0.7, 0.7);
    const Tensor3 h = fd_hessian(law.energy, x);
    EXPECT_LE((lambda_matrix(law, x, StressFlavor::Kirchhoff).matrix - h).norm(), 1e-4 * (1 + h.norm()));
  }
}

TEST(BakerEricksen, UniaxialMargin) {
  const BakerEricksenCheck c = check_be(Vector3(3, 1, 1) / e, Vector3(e, 1, 1));
  EXPECT_TRUE(c.pass);
  ASSERT_TRUE(c.margin.has_value());
  EXPECT_NEAR(*c.margin, 2 / e * (e - 1), 1e-15);
}

TEST(BakerEricksen, EqualStretchesAreVacuous) {
  const BakerEricksenCheck c = check_be(Vector3(5, -2, 1), Vector3::Constant(1.3));
  EXPECT_TRUE(c.pass);
  EXPECT_FALSE(c.margin.has_value());
}

TEST(BakerEricksen, NegativeLawFails) {
  const Vector3 l(2, 1, 1);
  const BakerEricksenCheck c = check_be(principal_stress(negative_identity_law(), l.array().log(), StressFlavor::Kirchhoff), l);
  EXPECT_FALSE(c.pass);
  ASSERT_TRUE(c.worst_pair.has_value());
  EXPECT_EQ((*c.worst_pair)[0], 0);
  EXPECT_NE((*c.worst_pair)[1], 0);
}

TEST(PairProduct, HenckyUniaxial) {
  EXPECT_NEAR(check_tstsm_pair(hencky_law(1, 1), Vector3(1, 0, 0), Vector3::Zero(), StressFlavor::Kirchhoff), 3.0,
              1e-13);
}

TEST(PairProduct, RejectsEqualPoints) {
  EXPECT_THROW(check_tstsm_pair(hencky_law(1, 1), Vector3(1, 0, 0), Vector3(1, 0, 0), StressFlavor::Kirchhoff),
               Error);
}

TEST(PairProduct, SwapSymmetric) {
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    const Vector3 a = rng.uniform_vector(-1, 1), b = rng.uniform_vector(-1, 1);
    const Tensor3 ra = rng.rotation(), rb = rng.rotation();
    const MaterialLaw law = cauchy_nonhyper_law(1, 1, 0.2);
    const double ab = check_tstsm_pair(law, a, b, StressFlavor::Cauchy, ra, rb);
    const double ba = check_tstsm_pair(law, b, a, StressFlavor::Cauchy, rb, ra);
    EXPECT_NEAR(ab, ba, 1e-12 * (1 + std::abs(ab)));
  }
}

TEST(Quadrature, GaussLegendreExactness) {
  for (int n : {8, 16, 64}) {
    const Quadrature q = gauss_legendre(n);
    ASSERT_EQ(q.nodes.size(), static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; p += 3) {
      double sum = 0;
      for (int i = 0; i < n; ++i) sum += q.weights[i] * std::pow(q.nodes[i], p);
      EXPECT_NEAR(sum, 1.0 / (p + 1), 1e-13) << n << " " << p;
    }
  }
}

TEST(LineIntegral, ConstantIntegrandIsExact) {
  const Vector3 a(0.3, -0.2, 0.5), b(-0.1, 0.4, 0.0);
  const Vector3 d = a - b;
  const double expected = d.dot(lambda_matrix(hencky_law(1, 1), a, StressFlavor::Kirchhoff).matrix * d);
  EXPECT_NEAR(line_integral_monotonicity(hencky_law(1, 1), a, b, 8, StressFlavor::Kirchhoff), expected, 1e-13);
  EXPECT_NEAR(check_tstsm_pair(hencky_law(1, 1), a, b, StressFlavor::Kirchhoff), expected, 1e-13);
}

TEST(LineIntegral, MatchesPairProduct) {
  Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const Vector3 a = rng.uniform_vector(-0.8, 0.8), b = rng.uniform_vector(-0.8, 0.8);
    for (const MaterialLaw& law : {MaterialLaw(exp_hencky_law(1, 1, 1, 1)), MaterialLaw(cauchy_nonhyper_law(1, 1, 0.2))}) {
      for (StressFlavor f : {StressFlavor::Cauchy, StressFlavor::Kirchhoff}) {
        const double pair = check_tstsm_pair(law, a, b, f);
        EXPECT_NEAR(line_integral_monotonicity(law, a, b, 64, f), pair, 1e-6 * (1 + std::abs(pair)));
      }
    }
  }
}

TEST(LineIntegral, RejectsTooFewNodes) {
  EXPECT_THROW(line_integral_monotonicity(hencky_law(1, 1), Vector3(1, 0, 0), Vector3::Zero(), 4,
                                          StressFlavor::Kirchhoff),
               Error);
}

TEST(LineIntegral, PositiveDefiniteSegmentGivesPositivePair) {
  Rng rng(6);
  const MaterialLaw law = exp_hencky_law(1, 1, 1, 1);
  int audited = 0;
  for (int k = 0; k < 100; ++k) {
    const Vector3 a = rng.uniform_vector(-1, 1), b = rng.uniform_vector(-1, 1);
    bool pd = true;
    for (double t : gauss_legendre(16).nodes) pd &= check_tstsm_pp(law, b + t * (a - b), StressFlavor::Cauchy).positive;
    if (!pd) continue;
    ++audited;
    EXPECT_GT(check_tstsm_pair(law, a, b, StressFlavor::Cauchy), 0.0);
  }
  EXPECT_GT(audited, 10);
}

TEST(Csp, HenckyAtReference) {
  const CspResult r = csp_sampled(hencky_law(1, 1), state_from_log_stretches(Vector3::Zero()), 200, 1);
  EXPECT_NEAR(r.exact_minimum, 2, 1e-8);
  EXPECT_NEAR(r.block_minimum, 2, 1e-8);
  EXPECT_GE(r.minimum, r.exact_minimum - 1e-9);
  EXPECT_NEAR(r.minimum, 2, 1e-8);  // the eigenvector candidate is always sampled
  EXPECT_EQ(r.directions, 200 + 6 + 1);
}

TEST(Csp, NegativeLameHasHydrostaticMinimizer) {
  const CspResult r = csp_sampled(hencky_law(1, -1), state_from_log_stretches(Vector3::Zero()), 200, 1);
  EXPECT_LT(r.minimum, 0);
  EXPECT_NEAR(r.exact_minimum, -1, 1e-8);
  const Tensor3 hydro = Tensor3::Identity() / std::sqrt(3.0);
  EXPECT_NEAR(std::abs(frobenius(r.argmin.matrix(), hydro)), 1.0, 1e-6);
}

TEST(Csp, SampledBoundsExact) {
  Rng rng(7);
  for (int k = 0; k < 20; ++k) {
    const DeformationState st = state_from_log_stretches(rng.uniform_vector(-1, 1));
    for (StressFlavor f : {StressFlavor::Cauchy, StressFlavor::Kirchhoff}) {
      const CspResult r = csp_sampled(exp_hencky_law(1, 1, 1, 1), st, 50, k, f);
      EXPECT_GE(r.minimum, r.exact_minimum - 1e-9 * (1 + std::abs(r.exact_minimum)));
      EXPECT_EQ(r.exact_minimum > 0, r.block_minimum > 0);
      EXPECT_NEAR(r.argmin.norm(), 1.0, 1e-12);
    }
  }
}

TEST(Csp, SuperposedRotationLeavesMinimumUnchanged) {
  Rng rng(8);
  for (int k = 0; k < 10; ++k) {
    const Tensor3 f = state_from_log_stretches(rng.uniform_vector(-0.8, 0.8)).F * rng.rotation();
    const Tensor3 q = rng.rotation();
    const MaterialLaw law = cauchy_nonhyper_law(1, 1, 0.2);
    const CspResult a = csp_sampled(law, strain_measures(f), 100, 3);
    const CspResult b = csp_sampled(law, strain_measures(q * f), 100, 3);
    EXPECT_NEAR(a.exact_minimum, b.exact_minimum, 1e-6 * (1 + std::abs(a.exact_minimum)));
  }
}

TEST(Csp, QuadformPairingAgreesWithMatrix) {
  Rng rng(9);
  const DeformationState st = strain_measures(state_from_log_stretches(rng.uniform_vector(-0.8, 0.8)).F * rng.rotation());
  const QuadFormBlocks b = quad_form_blocks(exp_hencky_law(1, 1, 1, 1), st, StressFlavor::Cauchy);
  const Matrix6 p = csp_matrix(b);
  const Tensor3 n = spatial_axes(st);
  for (int k = 0; k < 10; ++k) {
    const SymmetricTensor3 d = rng.unit_symmetric();
    const Vector6 v = to_sym_coordinates(n.transpose() * d.matrix() * n);
    EXPECT_NEAR(csp_pairing_quadform(b, st, d), v.dot(p * v), 1e-10);
  }
}

TEST(Audit, HenckyGridIsConsistent) {
  const AuditReport r = equivalence_audit(hencky_law(1, 1), grid(5, -1, 1), {.n_directions = 60});
  EXPECT_TRUE(r.consistent());
  for (const FlavorSummary& s : r.summaries) {
    EXPECT_EQ(s.inconsistent, 0u);
    EXPECT_EQ(s.sampling_mismatches, 0u);
    EXPECT_EQ(s.implication_violations, 0u);
    EXPECT_EQ(s.pass + s.fail + s.marginal, 125u);
  }
  EXPECT_EQ(r.summaries[1].pass, 125u);  // Kirchhoff flavor: constant Hessian
  EXPECT_GT(r.summaries[0].fail, 0u);
}

TEST(Audit, CauchyNonhyperGridIsConsistent) {
  const AuditReport r = equivalence_audit(cauchy_nonhyper_law(1, 1, 0.2), grid(5, -1, 1), {.n_directions = 60});
  EXPECT_TRUE(r.consistent());
}

TEST(Audit, ImplicationHoldsForBeViolatingLaw) {
  const AuditReport r = equivalence_audit(cauchy_nonhyper_law(0.3, 1, -1.5), grid(5, -1, 1), {.n_directions = 60});
  EXPECT_GT(r.be_failures, 0u);
  for (const FlavorSummary& s : r.summaries) EXPECT_EQ(s.implication_violations, 0u);
  for (const StateRecord& rec : r.records) {
    for (const FlavorRecord& f : rec.flavors) {
      if (f.lambda_min > 0) {
        EXPECT_TRUE(check_be(f.flavor == StressFlavor::Cauchy ? rec.sigma : rec.tau, rec.stretches).pass);
      }
    }
  }
}

TEST(Audit, IndependentOfJobs) {
  const std::vector<Vector3> states = grid(4, -1, 1);
  const AuditReport a = equivalence_audit(exp_hencky_law(1, 1, 1, 1), states, {.n_directions = 50, .jobs = 1});
  const AuditReport b = equivalence_audit(exp_hencky_law(1, 1, 1, 1), states, {.n_directions = 50, .jobs = 4});
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].index, i);
    for (std::size_t f = 0; f < a.records[i].flavors.size(); ++f) {
      EXPECT_EQ(a.records[i].flavors[f].csp_sampled, b.records[i].flavors[f].csp_sampled);
      EXPECT_EQ(a.records[i].flavors[f].lambda_min, b.records[i].flavors[f].lambda_min);
    }
  }
}

TEST(Audit, PermutationEquivariance) {
  Rng rng(10);
  std::vector<Vector3> states, permuted;
  for (int k = 0; k < 20; ++k) {
    const Vector3 x = rng.uniform_vector(-1, 1);
    states.push_back(x);
    permuted.emplace_back(x(2), x(0), x(1));
  }
  const MaterialLaw law = cauchy_nonhyper_law(1, 1, 0.2);
  const AuditReport a = equivalence_audit(law, states, {.n_directions = 50});
  const AuditReport b = equivalence_audit(law, permuted, {.n_directions = 50});
  for (std::size_t i = 0; i < states.size(); ++i) {
    const StateRecord& ra = a.records[i];
    const StateRecord& rb = b.records[i];
    EXPECT_NEAR(rb.sigma(0), ra.sigma(2), 1e-12 * (1 + ra.sigma.norm()));
    EXPECT_EQ(ra.be.pass, rb.be.pass);
    for (std::size_t f = 0; f < ra.flavors.size(); ++f) {
      EXPECT_NEAR(ra.flavors[f].lambda_min, rb.flavors[f].lambda_min, 1e-9);
      EXPECT_NEAR(ra.flavors[f].csp_exact, rb.flavors[f].csp_exact, 1e-7);
      EXPECT_EQ(ra.flavors[f].lambda_verdict, rb.flavors[f].lambda_verdict);
    }
  }
}
