#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uwit/linalg.hpp"
#include "uwit/patterns.hpp"
#include "uwit/witness.hpp"

namespace uwit {

enum class Strategy { discard, assignment };

/// Unnormalized hidden-variable states: Tr[rho_lambda] = p(lambda).
/// Patterns not present carry the zero operator.
using StrategyEnsemble = std::map<ClickPattern, HermitianOp>;

/// Index 4i + j of sigma_i (x) sigma_j in the flattened Pauli basis.
inline int pauli_index(int i, int j) { return 4 * i + j; }

struct LinearTerm {
  int var;
  double weight;
};
using LinearCombo = std::vector<LinearTerm>;

/// One PSD block, given by its Pauli coordinates as affine functions of the
/// program variables: block(x) = sum_k (offset[k] + coeffs[k].x) sigma-basis_k.
/// Variable blocks have unit coefficient rows; tied blocks (partial
/// transposes, observed state) reference the same variables.
struct BlockSpec {
  std::string label;
  std::array<LinearCombo, 16> coeffs;
  std::array<double, 16> offset{};
};

struct Equality {
  std::string label;
  LinearCombo lhs;
  double rhs = 0.0;
};

/// Minimization of an affine objective over PSD block constraints and linear
/// equalities. Variables are the Pauli coordinates of the hidden-variable
/// states: variable 16*g + pauli_index(i, j) is coordinate (i, j) of the
/// state attached to patterns[g]. Blocks are ordered: state blocks by
/// pattern code ascending, then their partial transposes in the same order,
/// then the observed-state block.
struct ConicProgram {
  Strategy strategy = Strategy::discard;
  double eta = 1.0;
  int num_vars = 0;
  std::vector<ClickPattern> patterns;
  std::vector<BlockSpec> blocks;
  std::vector<Equality> equalities;
  LinearCombo objective;
  double objective_constant = 0.0;

  int var_index(int group, int i, int j) const {
    return 16 * group + pauli_index(i, j);
  }
};

/// SDP lower-bounding <W> over separable (PPT) hidden-variable models under
/// the discard strategy at detection efficiency eta in (0, 1]. At eta = 1
/// the click-rate equalities force all mass onto the all-click pattern and
/// the program is emitted over that single pattern.
ConicProgram build_discard_program(const Witness& w, double eta);

/// Same for the assignment strategy with no-click biases a, b; eta in [0, 1].
/// At eta = 0 only the never-click pattern survives and no click statistics
/// exist, so the observed-state block is omitted; the optimum degenerates to
/// Tr[W (alpha (x) beta)].
ConicProgram build_assignment_program(const Witness& w,
                                      const AssignmentVector& a,
                                      const AssignmentVector& b, double eta);

/// Unit-trace operator reconstructed from click-conditioned expectation
/// values of the ensemble. Requires the click-rate equalities to hold to
/// 1e-6 (scaled); violations raise an error naming the offending settings.
HermitianOp observed_state(const StrategyEnsemble& ensemble, double eta);

/// Pauli coordinates of an ensemble in a program's variable layout. Patterns
/// carrying a nonzero operator but absent from the program are rejected.
Eigen::VectorXd ensemble_to_vars(const ConicProgram& p,
                                 const StrategyEnsemble& ensemble);

StrategyEnsemble vars_to_ensemble(const ConicProgram& p,
                                  const Eigen::VectorXd& x);

double objective_value(const ConicProgram& p, const Eigen::VectorXd& x);

/// |lhs.x - rhs| / max(1, |rhs|) per equality.
std::vector<double> equality_residuals(const ConicProgram& p,
                                       const Eigen::VectorXd& x);

HermitianOp assemble_block(const ConicProgram& p, int block_index,
                           const Eigen::VectorXd& x);

/// Sparse SDPA-style text of the program for cross-validation with external
/// solvers. Hermitian blocks are written as their 8x8 real embeddings in the
/// documented order (states ascending, partial transposes, observed state);
/// each equality becomes a complementary pair of diagonal entries in one
/// trailing diagonal block. The objective constant is noted in a comment.
std::string export_sdpa_sparse(const ConicProgram& p);

}  // namespace uwit
