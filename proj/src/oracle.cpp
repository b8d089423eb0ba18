#include "uwit/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uwit {

namespace {

const double kEtaStar = 1.0 / std::sqrt(3.0);

void check_eta_positive(double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in (0, 1], got " +
                                std::to_string(eta));
  }
}

HermitianOp two_term_mixture(const Eigen::Vector2cd& u,
                             const Eigen::Vector2cd& v,
                             const Eigen::Vector2cd& up,
                             const Eigen::Vector2cd& vp) {
  auto proj = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
    Eigen::Vector4cd ket;
    ket << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
    return (ket * ket.adjoint()).eval();
  };
  return HermitianOp::from_matrix(0.5 * (proj(u, v) + proj(up, vp)));
}

}  // namespace

double discard_bell_min(double eta) {
  check_eta_positive(eta);
  if (eta > kEtaStar) return 0.25 - 1.0 / (4.0 * eta * eta);
  return -0.5;
}

double assignment_bell_min_zero(double eta) {
  if (!(eta >= 0.0) || eta > 1.0) {
    throw std::invalid_argument("eta must lie in [0, 1], got " +
                                std::to_string(eta));
  }
  if (eta > kEtaStar) return 0.0;
  return 0.25 - 0.75 * eta * eta;
}

ClosedFormWeights closed_form_weights(double eta) {
  check_eta_positive(eta);
  ClosedFormWeights p;
  if (eta > kEtaStar) {
    p.p1 = (3.0 * eta * eta - 1.0) / 2.0;
    p.p2 = (1.0 - eta) * (1.0 - eta) / 2.0;
    p.p3 = (1.0 - eta) * (2.0 * eta - 1.0) / 2.0;
  } else if (eta <= 1.0 / 3.0) {
    p.p0 = (1.0 - 3.0 * eta) * (1.0 - 3.0 * eta);
    p.p3 = eta * eta / 2.0;
    p.p4 = eta - 2.0 * eta * eta;
  } else {
    p.p2 = (1.0 - 3.0 * eta) * (1.0 - 3.0 * eta) / 6.0;
    p.p3 = (6.0 * eta - 1.0 - 7.0 * eta * eta) / 4.0;
    p.p4 = (1.0 - 3.0 * eta * eta) / 6.0;
  }
  for (double w : {p.p0, p.p1, p.p2, p.p3, p.p4}) {
    if (w < -1e-15) {
      throw std::invalid_argument(
          "ensemble weights negative at eta = " + std::to_string(eta) +
          "; branch boundaries are 1/3 and 1/sqrt(3)");
    }
  }
  return p;
}

HermitianOp rho_xx() {
  const Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const Eigen::Vector2cd minus(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0));
  return two_term_mixture(plus, plus, minus, minus);
}

HermitianOp rho_yy() {
  const Complex i(0.0, 1.0);
  const Eigen::Vector2cd plus_i(1.0 / std::sqrt(2.0), i / std::sqrt(2.0));
  const Eigen::Vector2cd minus_i(1.0 / std::sqrt(2.0), -i / std::sqrt(2.0));
  return two_term_mixture(plus_i, minus_i, minus_i, plus_i);
}

HermitianOp rho_zz() {
  const Eigen::Vector2cd zero(1.0, 0.0);
  const Eigen::Vector2cd one(0.0, 1.0);
  return two_term_mixture(zero, zero, one, one);
}

StrategyEnsemble build_closed_form_ensemble(double eta, Strategy) {
  const ClosedFormWeights p = closed_form_weights(eta);
  StrategyEnsemble ens;
  const HermitianOp mixed = HermitianOp::identity(4) * 0.25;
  const HermitianOp xx = rho_xx();
  const HermitianOp yy = rho_yy();
  const HermitianOp zz = rho_zz();

  auto put = [&](std::initializer_list<int> bits, const HermitianOp& op,
                 double weight) {
    if (weight == 0.0) return;
    ens.emplace(ClickPattern::from_bits(std::vector<int>(bits)), op * weight);
  };

  put({0, 0, 0, 0, 0, 0}, mixed, p.p0);
  put({1, 1, 1, 1, 1, 1}, (xx + yy + zz) * (1.0 / 3.0), p.p1);

  put({1, 0, 0, 1, 0, 0}, xx, p.p2);
  put({1, 0, 1, 1, 1, 0}, xx, p.p2);
  put({1, 1, 0, 1, 0, 1}, xx, p.p2);
  put({1, 0, 0, 1, 1, 1}, xx, p.p3);
  put({1, 1, 1, 1, 0, 0}, xx, p.p3);

  put({0, 1, 0, 0, 1, 0}, yy, p.p2);
  put({0, 1, 1, 1, 1, 0}, yy, p.p2);
  put({1, 1, 0, 0, 1, 1}, yy, p.p2);
  put({0, 1, 0, 1, 1, 1}, yy, p.p3);
  put({1, 1, 1, 0, 1, 0}, yy, p.p3);

  put({0, 0, 1, 0, 0, 1}, zz, p.p2);
  put({0, 1, 1, 1, 0, 1}, zz, p.p2);
  put({1, 0, 1, 0, 1, 1}, zz, p.p2);
  put({0, 0, 1, 1, 1, 1}, zz, p.p3);
  put({1, 1, 1, 0, 0, 1}, zz, p.p3);

  put({1, 0, 0, 0, 0, 0}, mixed, p.p4);
  put({0, 1, 0, 0, 0, 0}, mixed, p.p4);
  put({0, 0, 1, 0, 0, 0}, mixed, p.p4);
  put({0, 0, 0, 1, 0, 0}, mixed, p.p4);
  put({0, 0, 0, 0, 1, 0}, mixed, p.p4);
  put({0, 0, 0, 0, 0, 1}, mixed, p.p4);

  return ens;
}

FeasibilityReport verify_feasibility(const StrategyEnsemble& ensemble,
                                     const ConicProgram& program) {
  const Eigen::VectorXd x = ensemble_to_vars(program, ensemble);
  FeasibilityReport rep;
  rep.objective = objective_value(program, x);
  rep.max_equality_residual = 0.0;
  for (double r : equality_residuals(program, x)) {
    rep.max_equality_residual = std::max(rep.max_equality_residual, r);
  }
  rep.min_block_eigenvalue = std::numeric_limits<double>::infinity();
  for (int b = 0; b < static_cast<int>(program.blocks.size()); ++b) {
    rep.min_block_eigenvalue = std::min(
        rep.min_block_eigenvalue, min_eigenvalue(assemble_block(program, b, x)));
  }
  return rep;
}

double necessity_extremal_value(const AssignmentVector& a) {
  const Eigen::Matrix2cd at = alpha_operator(a).mat().transpose();
  return max_eigenvalue(HermitianOp::from_matrix(at));
}

}  // namespace uwit
