#pragma once

#include "uwit/program.hpp"

namespace uwit {

enum class SolveStatus { optimal, infeasible, numerical_failure };

const char* to_string(SolveStatus s);

struct SolveResiduals {
  /// max over equalities of |lhs - rhs| / max(1, |rhs|), from the returned
  /// point.
  double max_equality_violation = 0.0;
  /// smallest eigenvalue over all program blocks at the returned point.
  double min_block_eigenvalue = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  double optimum = 0.0;
  StrategyEnsemble ensemble;
  SolveResiduals residuals;
};

struct SolveOptions {
  double tolerance = 1e-8;  // internal residual / relative-gap target
  int max_iterations = 150;
  bool verbose = false;  // iteration log to stderr
};

/// Primal-dual interior-point solve of a ConicProgram. Complex Hermitian
/// blocks are handled through their real symmetric embeddings, so the core
/// iterates over real PSD cones only. status == optimal guarantees
/// max_equality_violation <= 1e-6 and min_block_eigenvalue >= -1e-7.
/// Inconsistent equalities are reported as infeasible up front; when the main
/// iteration stalls, a phase-1 problem (minimize the uniform slack that makes
/// all blocks PSD) distinguishes infeasible programs from numerical failure.
SolveReport solve(const ConicProgram& p, const SolveOptions& opts = {});

}  // namespace uwit
