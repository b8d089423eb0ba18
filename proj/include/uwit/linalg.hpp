#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace uwit {

using Complex = std::complex<double>;

enum class Subsystem { A, B };

/// Two-qubit (4x4) or single-qubit (2x2) Hermitian operator.
///
/// Construction goes through from_matrix(), which rejects inputs whose
/// anti-Hermitian part exceeds 1e-10 and symmetrizes the rest, so every
/// instance is exactly Hermitian in storage.
class HermitianOp {
 public:
  static HermitianOp from_matrix(const Eigen::MatrixXcd& m);
  static HermitianOp identity(int dim);
  static HermitianOp zero(int dim);

  const Eigen::MatrixXcd& mat() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }

  HermitianOp operator+(const HermitianOp& other) const;
  HermitianOp operator-(const HermitianOp& other) const;
  HermitianOp operator*(double s) const;

 private:
  explicit HermitianOp(Eigen::MatrixXcd m) : m_(std::move(m)) {}
  Eigen::MatrixXcd m_;
};

inline HermitianOp operator*(double s, const HermitianOp& op) { return op * s; }

/// Pauli matrices: sigma(0) = identity, sigma(1..3) = x, y, z.
const Eigen::Matrix2cd& sigma(int k);

/// sigma_i (x) sigma_j as a 4x4 matrix, i, j in 0..3.
const Eigen::Matrix4cd& pauli_product(int i, int j);

/// Real coefficients of a two-qubit operator over {sigma_i (x) sigma_j},
/// normalized so that c[i][j] = Tr[M (sigma_i (x) sigma_j)] / 4.
struct PauliCoeffs {
  std::array<std::array<double, 4>, 4> c{};

  double& operator()(int i, int j) { return c[i][j]; }
  double operator()(int i, int j) const { return c[i][j]; }
};

PauliCoeffs pauli_expand(const HermitianOp& m);
HermitianOp pauli_assemble(const PauliCoeffs& coeffs);

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b);

/// Reduced operator on the kept subsystem (the other one is traced out).
HermitianOp partial_trace(const HermitianOp& m, Subsystem keep);

/// Transpose of one tensor factor; Hermiticity- and trace-preserving involution.
HermitianOp partial_transpose(const HermitianOp& m, Subsystem on);

double min_eigenvalue(const HermitianOp& m);
double max_eigenvalue(const HermitianOp& m);

/// Standard real-symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian
/// matrix; eigenvalues are those of the input with doubled multiplicity.
Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& m);

}  // namespace uwit
