#pragma once

#include "uwit/linalg.hpp"

namespace uwit {

/// Outcome bias assigned to no-click events, one entry per setting:
/// a_i = p(+ | setting i, no click) - p(- | setting i, no click).
struct AssignmentVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm_sq() const { return x * x + y * y + z * z; }
  bool is_zero() const { return x == 0.0 && y == 0.0 && z == 0.0; }
};

/// Entanglement witness with its Pauli decomposition cached alongside the
/// assembled matrix.
struct Witness {
  PauliCoeffs coeffs;
  HermitianOp matrix = HermitianOp::zero(4);
};

Witness witness_from_coeffs(const PauliCoeffs& coeffs);

/// W_theta = cos^2(theta) 1(x)1 - |Psi_theta><Psi_theta|, theta in (0, pi/4].
Witness build_theta_witness(double theta);

/// Projector onto sin(theta)|0,0> + cos(theta)|1,1>.
HermitianOp build_target_state(double theta);

/// Tr[W rho]; rho must be a state (unit trace, PSD to 1e-8).
double expectation(const Witness& w, const HermitianOp& rho);

/// (1 + a.sigma)/2; PSD iff |a| <= 1, which is not enforced here.
HermitianOp alpha_operator(const AssignmentVector& a);

/// State transformation realized by honest detectors with efficiency eta and
/// no-click assignments a (Alice), b (Bob):
///   rho -> eta^2 rho + eta(1-eta) rho_A (x) beta
///        + (1-eta)eta alpha (x) rho_B + (1-eta)^2 alpha (x) beta.
HermitianOp assignment_channel(const HermitianOp& rho,
                               const AssignmentVector& a,
                               const AssignmentVector& b, double eta);

/// Adjoint image W_eff of the witness under the honest assignment channel:
/// Tr[W_eff rho] = Tr[W channel(rho)] for every unit-trace rho.
HermitianOp effective_witness(const Witness& w, const AssignmentVector& a,
                              const AssignmentVector& b, double eta);

/// Closed form for <W_{pi/4}> on the Bell state after the assignment channel:
/// (1 - eta^2 - eta - (1-eta)^2 Tr[alpha^T beta]) / 2.
double bell_assignment_value(const AssignmentVector& a,
                             const AssignmentVector& b, double eta);

/// true iff a1^2 + a2^2 + a3^2 <= 1 (+1e-12), the condition under which the
/// channel maps separable states to separable states.
bool is_valid_assignment(const AssignmentVector& a);

}  // namespace uwit
