#include "corostab/stress.hpp"

namespace corostab {

namespace {

Vector3 principal_s2_of(const MaterialLaw& law, const DeformationState& state) {
  const Vector3 tau = principal_kirchhoff(law, state.log_stretches);
  return tau.cwiseQuotient(state.stretches.cwiseProduct(state.stretches));
}

}  // namespace

SymmetricTensor3 second_pk(const MaterialLaw& law, const DeformationState& state) {
  const Tensor3& u = state.spectral.vectors;
  return SymmetricTensor3(u * principal_s2_of(law, state).asDiagonal() * u.transpose());
}

StressState cauchy_stress(const MaterialLaw& law, const DeformationState& state) {
  StressState out;
  out.principal_tau = principal_kirchhoff(law, state.log_stretches);
  out.principal_s2 = out.principal_tau.cwiseQuotient(state.stretches.cwiseProduct(state.stretches));
  out.principal_sigma = out.principal_tau / state.J;
  const Tensor3& u = state.spectral.vectors;
  out.s2 = SymmetricTensor3(u * out.principal_s2.asDiagonal() * u.transpose());
  out.tau = SymmetricTensor3(state.F * out.s2.matrix() * state.F.transpose());
  out.sigma = (1.0 / state.J) * out.tau;
  out.spatial_vectors = state.spatial_vectors();
  return out;
}

Tensor3 first_pk(const StressState& stress, const DeformationState& state) {
  return state.J * stress.sigma.matrix() * state.F.inverse().transpose();
}

SymmetricTensor3 kirchhoff_spectral(const MaterialLaw& law, const DeformationState& state) {
  Tensor3 n = state.spatial_vectors();
  for (int i = 0; i < 3; ++i) n.col(i) /= state.stretches(i);
  n = gram_schmidt(n);
  const Vector3 tau = principal_kirchhoff(law, state.log_stretches);
  return SymmetricTensor3(n * tau.asDiagonal() * n.transpose());
}

}  // namespace corostab
