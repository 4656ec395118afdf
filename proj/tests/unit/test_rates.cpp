#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "corostab/errors.hpp"
#include "corostab/quadforms.hpp"
#include "corostab/random.hpp"
#include "corostab/rates.hpp"

using namespace corostab;

namespace {

MotionPath constant_path(const Tensor3& f) {
  return MotionPath([f](double) { return f; }, -1, 1);
}

std::vector<MaterialLaw> laws() {
  return {hencky_law(1, 1), exp_hencky_law(1, 1, 1, 1), cauchy_nonhyper_law(1, 1, 0.2)};
}

MotionPath random_path(Rng& rng) {
  return smooth_path(random_path_spec(rng, rng.uniform_vector(-0.7, 0.7), 1.0));
}

}  // namespace

TEST(ZjRate, VanishesUnderRigidRotationOfPrestretch) {
  // F = R(t) F0: sigma rotates with the spin, so the corotational rate is zero.
  const MotionPath path = superpose_rotation(constant_path(Tensor3(Vector3(1.5, 1, 0.8).asDiagonal())), 0.9,
                                             Vector3(1, 2, 3));
  for (const MaterialLaw& law : laws()) {
    const RateSample r = zj_rate(law, path, 0.3);
    EXPECT_GT(r.sigma.norm(), 0.1);
    EXPECT_GT(r.sigma_dot.norm(), 0.1);
    EXPECT_LE(r.D.norm(), 1e-9);
    EXPECT_LE(r.zj_sigma.norm(), 1e-7);
    EXPECT_LE(r.zj_tau.norm(), 1e-7);
  }
}

TEST(ZjRate, PureStretchHasNoSpin) {
  const RateSample r = zj_rate(hencky_law(1, 1), pure_stretch_path(), 0.2);
  EXPECT_LE(r.W.norm(), 1e-12);
  EXPECT_LE((r.zj_sigma.matrix() - r.sigma_dot.matrix()).norm(), 1e-12);
  EXPECT_LE((r.D.matrix() - Tensor3(Vector3(1, 0, 0).asDiagonal())).norm(), 1e-9);
}

TEST(ZjRate, FrozenDeformationHasZeroRate) {
  const RateSample r = zj_rate(exp_hencky_law(1, 1, 1, 1), constant_path(Tensor3(Vector3(2, 1, 1).asDiagonal())), 0);
  EXPECT_EQ(r.sigma_dot.norm(), 0.0);
  EXPECT_EQ(r.zj_sigma.norm(), 0.0);
}

TEST(ZjRate, AssemblyIdentity) {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const RateSample r = zj_rate(cauchy_nonhyper_law(1, 1, 0.2), random_path(rng), 0.0);
    const Tensor3 s = r.sigma.matrix();
    const Tensor3 expected = r.sigma_dot.matrix() + s * r.W - r.W * s;
    EXPECT_LE((r.zj_sigma.matrix() - expected).norm(), 1e-12 * (1 + expected.norm()));
    const Tensor3 t = r.tau.matrix();
    const Tensor3 expected_tau = r.tau_dot.matrix() + t * r.W - r.W * t;
    EXPECT_LE((r.zj_tau.matrix() - expected_tau).norm(), 1e-12 * (1 + expected_tau.norm()));
  }
}

TEST(ZjRate, HenckyUniaxialPairingAtReference) {
  EXPECT_NEAR(csp_pairing(zj_rate(hencky_law(1, 1), pure_stretch_path(), 0.0)), 3.0, 1e-8);
}

TEST(ZjRate, VolumetricCompressionWithNegativeLame) {
  // tau_i = 2x_i - s on x = (t, t, t) gives tau = -t 1, so the pairing is -3.
  const MotionPath path([](double t) { return Tensor3(std::exp(t) * Tensor3::Identity()); }, -1, 1);
  EXPECT_NEAR(csp_pairing(zj_rate(hencky_law(1, -1), path, 0.0)), -3.0, 1e-8);
}

TEST(ZjRate, Objectivity) {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    const MotionPath base = random_path(rng);
    const Vector3 axis = rng.uniform_vector(-1, 1);
    const double omega = rng.uniform(-2, 2);
    const MotionPath rotated = superpose_rotation(base, omega, axis);
    const Tensor3 q = rotation_from_axial(0.25 * omega * axis.normalized());
    for (const MaterialLaw& law : laws()) {
      const RateSample a = zj_rate(law, base, 0.25);
      const RateSample b = zj_rate(law, rotated, 0.25);
      const Tensor3 expected = q * a.zj_sigma.matrix() * q.transpose();
      EXPECT_LE((b.zj_sigma.matrix() - expected).norm(), 1e-6 * (1 + expected.norm()));
      EXPECT_NEAR(csp_pairing(a), csp_pairing(b), 1e-6 * (1 + std::abs(csp_pairing(a))));
    }
  }
}

TEST(ZjRate, ThrowsNearPathEnds) {
  EXPECT_THROW(zj_rate(hencky_law(1, 1), pure_stretch_path(), 1.0), DomainExceeded);
  EXPECT_THROW(zj_rate(hencky_law(1, 1), pure_stretch_path(), -1.0), DomainExceeded);
}

TEST(CorotatedFrame, IdentityWithoutSpin) {
  const CorotatedFrame frame(pure_stretch_path(), -1, 1, 100);
  for (const Tensor3& q : frame.rotations()) EXPECT_LE((q - Tensor3::Identity()).norm(), 1e-12);
}

TEST(CorotatedFrame, ConstantSpinClosedForm) {
  const Vector3 axis = Vector3(1, -2, 0.5).normalized();
  const double omega = 1.7;
  const MotionPath path = superpose_rotation(constant_path(Tensor3(Vector3(1.3, 1, 0.9).asDiagonal())), omega, axis);
  const CorotatedFrame frame(path, -1, 1, 1000);
  for (std::size_t i = 0; i < frame.times().size(); i += 50) {
    const Tensor3 expected = rotation_from_axial(omega * (frame.times()[i] + 1) * axis);
    EXPECT_LE((frame.rotations()[i] - expected).norm(), 1e-8);
  }
  EXPECT_LE((frame.at(0.123) - rotation_from_axial(omega * 1.123 * axis)).norm(), 1e-8);
}

TEST(CorotatedFrame, StaysOrthogonalUnderShear) {
  const CorotatedFrame frame(simple_shear_path(), -1, 1, 400);
  EXPECT_LE(frame.orthogonality_defect(), 1e-9);
}

TEST(CorotatedFrame, TwoRoutesAgree) {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const MotionPath path = random_path(rng);
    const CorotatedFrame frame(path, -0.5, 0.5, 200);
    for (const MaterialLaw& law : laws()) {
      const Tensor3 direct = zj_rate(law, path, 0.1).zj_sigma.matrix();
      const Tensor3 via = zj_rate_via_frame(law, path, 0.1, frame).matrix();
      EXPECT_LE((via - direct).norm(), 1e-6 * (1 + direct.norm()));
    }
  }
}

TEST(CorotatedFrame, ShearRoutesAgree) {
  const MotionPath path = simple_shear_path();
  const CorotatedFrame frame(path, -1, 1, 400);
  const Tensor3 direct = zj_rate(hencky_law(1, 1), path, 0.4).zj_sigma.matrix();
  const Tensor3 via = zj_rate_via_frame(hencky_law(1, 1), path, 0.4, frame).matrix();
  EXPECT_LE((via - direct).norm(), 1e-6 * (1 + direct.norm()));
}

TEST(MainIdentity, CauchyAndKirchhoffPairings) {
  Rng rng(4);
  for (int k = 0; k < 40; ++k) {
    const MotionPath path = random_path(rng);
    for (const MaterialLaw& law : laws()) {
      const RateSample r = zj_rate(law, path, 0.0);
      const DeformationState st = strain_measures(r.F);
      const Tensor3 e = edot_components(st, r.edot());
      const double qs = full_form_value(quad_form_blocks(law, st, StressFlavor::Cauchy), e);
      const double qt = full_form_value(quad_form_blocks(law, st, StressFlavor::Kirchhoff), e);
      EXPECT_LE(std::abs(r.J * csp_pairing(r) - qs), 1e-5 * (1 + std::abs(qs)));
      // No J factor on the Kirchhoff side.
      EXPECT_LE(std::abs(kirchhoff_pairing(r) - qt), 1e-5 * (1 + std::abs(qt)));
    }
  }
}

TEST(MainIdentity, KirchhoffFactorIsOneNotInverseJ) {
  Rng rng(5);
  double worst_one = 0, worst_inv = 0;
  for (int k = 0; k < 40; ++k) {
    const RateSample r = zj_rate(exp_hencky_law(1, 1, 1, 1), random_path(rng), 0.0);
    if (std::abs(std::log(r.J)) < 0.3) continue;
    const DeformationState st = strain_measures(r.F);
    const double qt = full_form_value(qtau_blocks(exp_hencky_law(1, 1, 1, 1), st), edot_components(st, r.edot()));
    const double p = kirchhoff_pairing(r);
    worst_one = std::max(worst_one, std::abs(p - qt) / (1 + std::abs(qt)));
    worst_inv = std::max(worst_inv, std::abs(p - qt / r.J) / (1 + std::abs(qt)));
  }
  EXPECT_LE(worst_one, 1e-5);
  EXPECT_GT(worst_inv, 1e-2);
}
