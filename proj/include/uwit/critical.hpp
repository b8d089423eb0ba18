#pragma once

#include <vector>

#include "uwit/solver.hpp"
#include "uwit/witness.hpp"

namespace uwit {

struct CurveSample {
  double eta = 0.0;
  double separable_min = 0.0;
  double entangled_value = 0.0;
};

struct CriticalResult {
  double eta_crit = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
  std::vector<CurveSample> curve;  // every probe, ascending in eta
};

/// Best witness value achievable with the honest entangled source at
/// efficiency eta: the click-conditioned value <W_theta> on |Psi_theta>
/// (eta-independent) for the discard strategy, the smallest eigenvalue of
/// the effective witness for the assignment strategy.
double entangled_value(double theta, Strategy strategy,
                       const AssignmentVector& a, const AssignmentVector& b,
                       double eta);

/// Worst-case separable bound at eta via the SDP; throws on solver failure.
double separable_minimum(double theta, Strategy strategy,
                         const AssignmentVector& a, const AssignmentVector& b,
                         double eta, const SolveOptions& opts = {});

/// Bisection for the efficiency at which the separable bound starts to
/// exceed the entangled value, over the bracket [lo, hi] (default
/// [0.3, 1.0]). Entanglement counts as detectable when the gap exceeds
/// twice the solver gate of 1e-6. Requires tol >= 1e-6; errors if the whole
/// bracket is detectable or undetectable, or if the recorded gap fails to be
/// monotone in eta beyond tolerance.
CriticalResult find_critical_eta(double theta, Strategy strategy,
                                 const AssignmentVector& a,
                                 const AssignmentVector& b, double tol,
                                 const SolveOptions& opts = {},
                                 double bracket_lo = 0.3,
                                 double bracket_hi = 1.0);

}  // namespace uwit
