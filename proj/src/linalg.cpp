#include "uwit/linalg.hpp"

#include <stdexcept>
#include <string>

namespace uwit {

namespace {

constexpr double kHermitianGate = 1e-10;

Eigen::Matrix4cd kron2x2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd z;
  z.block<2, 2>(0, 0) = a(0, 0) * b;
  z.block<2, 2>(0, 2) = a(0, 1) * b;
  z.block<2, 2>(2, 0) = a(1, 0) * b;
  z.block<2, 2>(2, 2) = a(1, 1) * b;
  return z;
}

}  // namespace

HermitianOp HermitianOp::from_matrix(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw std::invalid_argument("HermitianOp: dimension must be 2 or 4, got " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  const double residual = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (residual > kHermitianGate) {
    throw std::invalid_argument(
        "HermitianOp: matrix is not Hermitian (residual " +
        std::to_string(residual) + ")");
  }
  return HermitianOp(((m + m.adjoint()) / 2.0).eval());
}

HermitianOp HermitianOp::identity(int dim) {
  return HermitianOp(Eigen::MatrixXcd::Identity(dim, dim));
}

HermitianOp HermitianOp::zero(int dim) {
  return HermitianOp(Eigen::MatrixXcd::Zero(dim, dim));
}

HermitianOp HermitianOp::operator+(const HermitianOp& other) const {
  return HermitianOp(m_ + other.m_);
}

HermitianOp HermitianOp::operator-(const HermitianOp& other) const {
  return HermitianOp(m_ - other.m_);
}

HermitianOp HermitianOp::operator*(double s) const {
  return HermitianOp(m_ * s);
}

const Eigen::Matrix2cd& sigma(int k) {
  static const std::array<Eigen::Matrix2cd, 4> table = [] {
    std::array<Eigen::Matrix2cd, 4> t;
    const Complex i(0.0, 1.0);
    t[0] << 1, 0, 0, 1;
    t[1] << 0, 1, 1, 0;
    t[2] << 0, -i, i, 0;
    t[3] << 1, 0, 0, -1;
    return t;
  }();
  if (k < 0 || k > 3) throw std::invalid_argument("sigma: index out of range");
  return table[k];
}

const Eigen::Matrix4cd& pauli_product(int i, int j) {
  static const std::array<Eigen::Matrix4cd, 16> table = [] {
    std::array<Eigen::Matrix4cd, 16> t;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        t[4 * a + b] = kron2x2(sigma(a), sigma(b));
    return t;
  }();
  if (i < 0 || i > 3 || j < 0 || j > 3) {
    throw std::invalid_argument("pauli_product: index out of range");
  }
  return table[4 * i + j];
}

PauliCoeffs pauli_expand(const HermitianOp& m) {
  if (m.dim() != 4) {
    throw std::invalid_argument("pauli_expand: expected a 4x4 operator");
  }
  PauliCoeffs out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out(i, j) = (m.mat() * pauli_product(i, j)).trace().real() / 4.0;
    }
  }
  return out;
}

HermitianOp pauli_assemble(const PauliCoeffs& coeffs) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m += coeffs(i, j) * pauli_product(i, j);
  return HermitianOp::from_matrix(m);
}

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw std::invalid_argument("tensor: expected two single-qubit operators");
  }
  return HermitianOp::from_matrix(kron2x2(a.mat(), b.mat()));
}

HermitianOp partial_trace(const HermitianOp& m, Subsystem keep) {
  if (m.dim() != 4) {
    throw std::invalid_argument("partial_trace: expected a 4x4 operator");
  }
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  // Index convention: row = 2a + b for basis |a>_A |b>_B.
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      for (int t = 0; t < 2; ++t) {
        if (keep == Subsystem::A) {
          r(p, q) += m.mat()(2 * p + t, 2 * q + t);
        } else {
          r(p, q) += m.mat()(2 * t + p, 2 * t + q);
        }
      }
    }
  }
  return HermitianOp::from_matrix(r);
}

HermitianOp partial_transpose(const HermitianOp& m, Subsystem on) {
  if (m.dim() != 4) {
    throw std::invalid_argument("partial_transpose: expected a 4x4 operator");
  }
  Eigen::Matrix4cd r;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) {
          if (on == Subsystem::A) {
            r(2 * a + b, 2 * ap + bp) = m.mat()(2 * ap + b, 2 * a + bp);
          } else {
            r(2 * a + b, 2 * ap + bp) = m.mat()(2 * a + bp, 2 * ap + b);
          }
        }
  return HermitianOp::from_matrix(r);
}

Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& m) {
  const auto n = m.rows();
  Eigen::MatrixXd e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = m.real();
  e.topRightCorner(n, n) = -m.imag();
  e.bottomLeftCorner(n, n) = m.imag();
  e.bottomRightCorner(n, n) = m.real();
  return e;
}

double min_eigenvalue(const HermitianOp& m) {
  // Dense real-symmetric solve on the embedding; dimension is at most 8.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      real_embedding(m.mat()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const HermitianOp& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      real_embedding(m.mat()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace uwit
