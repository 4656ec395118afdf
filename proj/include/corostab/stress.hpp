#pragma once

#include "corostab/material.hpp"
#include "corostab/tensor.hpp"

namespace corostab {

/// Stress measures at one deformation state. Principal values follow the
/// ascending order of the state's Lagrangian frame.
struct StressState {
  SymmetricTensor3 s2;     ///< second Piola-Kirchhoff (referential)
  SymmetricTensor3 sigma;  ///< Cauchy
  SymmetricTensor3 tau;    ///< Kirchhoff, tau = J sigma
  Vector3 principal_s2;
  Vector3 principal_sigma;
  Vector3 principal_tau;
  Tensor3 spatial_vectors;  ///< columns u^i = F U^i, eigenvectors of sigma (not unit)
};

/// S2 = sum_i s_i U^i (x) U^i with s_i = tau_i / lambda_i^2.
SymmetricTensor3 second_pk(const MaterialLaw& law, const DeformationState& state);

/// Doyle-Ericksen route: sigma = F S2 F^T / J.
StressState cauchy_stress(const MaterialLaw& law, const DeformationState& state);

/// S1 = J sigma F^-T.
Tensor3 first_pk(const StressState& stress, const DeformationState& state);

/// Richter route: tau = sum_i tau_i n^i (x) n^i on the unit spatial axes
/// n^i = u^i / |u^i| (re-orthonormalized, which matters only for repeated
/// stretches).
SymmetricTensor3 kirchhoff_spectral(const MaterialLaw& law, const DeformationState& state);

}  // namespace corostab
