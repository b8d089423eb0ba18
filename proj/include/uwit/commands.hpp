#pragma once

#include <string>

#include "uwit/critical.hpp"
#include "uwit/oracle.hpp"

namespace uwit {

/// Parameters shared by the CLI commands. eta_start/eta_stop double as the
/// bisection bracket for the critical-efficiency search.
struct RunConfig {
  Strategy strategy = Strategy::discard;
  double theta = 0.78539816339744831;  // pi/4
  AssignmentVector assign_a;
  AssignmentVector assign_b;
  double eta_start = 0.40;
  double eta_stop = 1.00;
  double eta_step = 0.05;
  double tolerance = 1e-4;
  std::string output_path = "-";  // "-" means stdout
  bool inject_perturbation = false;  // verify self-test: break the ensemble
  bool verbose = false;
};

/// "pi/<n>" or a plain decimal, in radians.
double parse_theta(const std::string& text);

/// "x,y,z" with optional spaces.
AssignmentVector parse_assignment(const std::string& text);

/// 12 significant digits, C locale, negative zero normalized.
std::string format_number(double v);

/// eta,separable_min,entangled_value,oracle_value,residual rows over the
/// grid; the oracle column is filled only for Bell-witness cases with a
/// closed form. Failed solves put solver_failure(<status>) in the
/// separable_min field. Returns the process exit code.
int cmd_sweep(const RunConfig& cfg);

/// Critical-efficiency search; prints the root and writes the probe curve
/// as CSV when an output path is set.
int cmd_critical(const RunConfig& cfg);

/// Closed-form ensemble certification plus solver agreement over the eta
/// grid (exact branch boundaries 1/3 and 1/sqrt(3) are always included),
/// one machine-readable PASS/FAIL line per check.
int cmd_verify(const RunConfig& cfg);

/// eta,entangled_floor,bell_state_value rows for the assignment strategy:
/// the smallest eigenvalue of the effective witness next to the Bell-state
/// value, which differ for assignments that are not norm-preserving.
int cmd_floor(const RunConfig& cfg);

}  // namespace uwit
