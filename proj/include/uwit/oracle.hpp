#pragma once

#include "uwit/program.hpp"
#include "uwit/witness.hpp"

namespace uwit {

/// Closed-form minimum of the Bell witness over separable hidden-variable
/// models under the discard strategy: 1/4 - 1/(4 eta^2) above eta = 1/sqrt(3),
/// saturating at -1/2 below.
double discard_bell_min(double eta);

/// Same for the assignment strategy with a = b = 0: zero above 1/sqrt(3),
/// 1/4 - 3 eta^2 / 4 below.
double assignment_bell_min_zero(double eta);

/// Weights of the explicit optimal ensemble; which of them are active
/// depends on the efficiency branch (eta <= 1/3, (1/3, 1/sqrt(3)], above).
struct ClosedFormWeights {
  double p0 = 0.0;  // never-click pattern, maximally mixed
  double p1 = 0.0;  // all-click pattern, (rho_xx + rho_yy + rho_zz)/3
  double p2 = 0.0;  // nine three-click patterns, axis-correlated states
  double p3 = 0.0;  // six four-click patterns, axis-correlated states
  double p4 = 0.0;  // six single-click patterns, maximally mixed
};

ClosedFormWeights closed_form_weights(double eta);

/// Separable two-qubit states with <sigma_1 sigma_1> = 1, <sigma_2 sigma_2>
/// = -1 and <sigma_3 sigma_3> = 1 respectively; all other single- and
/// two-site Pauli components vanish. Note rho_yy is built from sigma_y
/// eigenstate pairs, so its sigma_1 (x) sigma_1 component is zero, not -1.
HermitianOp rho_xx();
HermitianOp rho_yy();
HermitianOp rho_zz();

/// The explicit optimal ensemble for the Bell witness at efficiency eta.
/// The same ensemble is optimal for both strategies; only the objective
/// value differs. Patterns with zero weight are omitted.
StrategyEnsemble build_closed_form_ensemble(double eta, Strategy strategy);

struct FeasibilityReport {
  double max_equality_residual = 0.0;  // scaled as in equality_residuals
  double min_block_eigenvalue = 0.0;   // over all program blocks
  double objective = 0.0;
};

FeasibilityReport verify_feasibility(const StrategyEnsemble& ensemble,
                                     const ConicProgram& program);

/// max_rho Tr[alpha(a)^T rho] over single-qubit states, i.e. the largest
/// eigenvalue of alpha(a)^T; equals (1 + |a|)/2. A value above 1 certifies a
/// false positive of the Bell witness at efficiencies (eta_A, eta_B) = (0, 1),
/// so the result exceeds 1 exactly when is_valid_assignment fails.
double necessity_extremal_value(const AssignmentVector& a);

}  // namespace uwit
