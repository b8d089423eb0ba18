#include "uwit/witness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uwit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kStatePsdTol = 1e-8;

void check_theta(double theta) {
  if (!(theta > 0.0) || theta > kPi / 4.0 + 1e-15) {
    throw std::invalid_argument("theta must lie in (0, pi/4], got " +
                                std::to_string(theta));
  }
}

void check_eta(double eta) {
  if (!(eta >= 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in [0, 1], got " +
                                std::to_string(eta));
  }
}

void check_state(const HermitianOp& rho) {
  if (std::abs(rho.trace() - 1.0) > kStatePsdTol) {
    throw std::invalid_argument("state must have unit trace, got " +
                                std::to_string(rho.trace()));
  }
  const double lo = min_eigenvalue(rho);
  if (lo < -kStatePsdTol) {
    throw std::invalid_argument("state is not PSD (min eigenvalue " +
                                std::to_string(lo) + ")");
  }
}

// Partial trace of a general (possibly non-Hermitian) 4x4 matrix; used for
// intermediates like W (1 (x) beta) whose reduction is Hermitian again.
Eigen::Matrix2cd raw_partial_trace(const Eigen::Matrix4cd& m, Subsystem keep) {
  Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      for (int t = 0; t < 2; ++t) {
        if (keep == Subsystem::A) {
          r(p, q) += m(2 * p + t, 2 * q + t);
        } else {
          r(p, q) += m(2 * t + p, 2 * t + q);
        }
      }
  return r;
}

}  // namespace

Witness witness_from_coeffs(const PauliCoeffs& coeffs) {
  return Witness{coeffs, pauli_assemble(coeffs)};
}

Witness build_theta_witness(double theta) {
  check_theta(theta);
  PauliCoeffs c;
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  c(0, 0) = c2 / 2.0 + 0.25;
  c(0, 3) = c(3, 0) = c2 / 4.0;
  c(1, 1) = -s2 / 4.0;
  c(2, 2) = s2 / 4.0;
  c(3, 3) = -0.25;
  return witness_from_coeffs(c);
}

HermitianOp build_target_state(double theta) {
  check_theta(theta);
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(0) = std::sin(theta);
  psi(3) = std::cos(theta);
  return HermitianOp::from_matrix((psi * psi.adjoint()).eval());
}

double expectation(const Witness& w, const HermitianOp& rho) {
  check_state(rho);
  return (w.matrix.mat() * rho.mat()).trace().real();
}

HermitianOp alpha_operator(const AssignmentVector& a) {
  Eigen::Matrix2cd m = sigma(0);
  m += a.x * sigma(1) + a.y * sigma(2) + a.z * sigma(3);
  return HermitianOp::from_matrix((m / 2.0).eval());
}

HermitianOp assignment_channel(const HermitianOp& rho,
                               const AssignmentVector& a,
                               const AssignmentVector& b, double eta) {
  check_eta(eta);
  check_state(rho);
  const HermitianOp alpha = alpha_operator(a);
  const HermitianOp beta = alpha_operator(b);
  const HermitianOp rho_a = partial_trace(rho, Subsystem::A);
  const HermitianOp rho_b = partial_trace(rho, Subsystem::B);
  return eta * eta * rho + eta * (1.0 - eta) * tensor(rho_a, beta) +
         (1.0 - eta) * eta * tensor(alpha, rho_b) +
         (1.0 - eta) * (1.0 - eta) * tensor(alpha, beta);
}

HermitianOp effective_witness(const Witness& w, const AssignmentVector& a,
                              const AssignmentVector& b, double eta) {
  check_eta(eta);
  const HermitianOp alpha = alpha_operator(a);
  const HermitianOp beta = alpha_operator(b);
  const HermitianOp id2 = HermitianOp::identity(2);
  const Eigen::Matrix4cd w4 = w.matrix.mat();

  // Tr_B[W (1 (x) beta)] acts on Alice, Tr_A[W (alpha (x) 1)] on Bob.
  const Eigen::Matrix4cd w_beta = w4 * tensor(id2, beta).mat();
  const Eigen::Matrix4cd w_alpha = w4 * tensor(alpha, id2).mat();
  const HermitianOp on_a =
      HermitianOp::from_matrix(raw_partial_trace(w_beta, Subsystem::A));
  const HermitianOp on_b =
      HermitianOp::from_matrix(raw_partial_trace(w_alpha, Subsystem::B));
  const double scalar = (w4 * tensor(alpha, beta).mat()).trace().real();

  return eta * eta * w.matrix + eta * (1.0 - eta) * tensor(on_a, id2) +
         (1.0 - eta) * eta * tensor(id2, on_b) +
         (1.0 - eta) * (1.0 - eta) * scalar * HermitianOp::identity(4);
}

double bell_assignment_value(const AssignmentVector& a,
                             const AssignmentVector& b, double eta) {
  const Eigen::Matrix2cd at = alpha_operator(a).mat().transpose();
  const double overlap = (at * alpha_operator(b).mat()).trace().real();
  return (1.0 - eta * eta - eta - (1.0 - eta) * (1.0 - eta) * overlap) / 2.0;
}

bool is_valid_assignment(const AssignmentVector& a) {
  return a.norm_sq() <= 1.0 + 1e-12;
}

}  // namespace uwit
