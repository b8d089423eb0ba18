#include <cmath>
#include <random>

#include <doctest.h>

#include "test_support.hpp"
#include "uwit/witness.hpp"

using namespace uwit;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("theta witness coefficients and matrix identity") {
  const Witness w = build_theta_witness(kPi / 4.0);
  CHECK(w.coeffs(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(w.coeffs(0, 3)) < 1e-15);
  CHECK(std::abs(w.coeffs(3, 0)) < 1e-15);
  CHECK(w.coeffs(1, 1) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(w.coeffs(2, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(w.coeffs(3, 3) == doctest::Approx(-0.25).epsilon(1e-14));

  for (int k = 1; k <= 20; ++k) {
    const double theta = kPi / 4.0 * k / 20.0;
    const Witness wt = build_theta_witness(theta);
    const Eigen::Matrix4cd expected =
        std::cos(theta) * std::cos(theta) * Eigen::Matrix4cd::Identity() -
        build_target_state(theta).mat();
    CHECK((wt.matrix.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pauli_assemble(wt.coeffs).mat() - wt.matrix.mat())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  CHECK_THROWS_AS(build_theta_witness(0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_theta_witness(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_theta_witness(kPi / 3.0), std::invalid_argument);
}

TEST_CASE("target state structure") {
  const HermitianOp bell = build_target_state(kPi / 4.0);
  CHECK(bell.trace() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(min_eigenvalue(partial_transpose(bell, Subsystem::A)) ==
        doctest::Approx(-0.5).epsilon(1e-12));

  const HermitianOp skew = build_target_state(kPi / 6.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(skew.mat());
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  const HermitianOp reduced = partial_trace(skew, Subsystem::A);
  CHECK(reduced.mat()(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(reduced.mat()(1, 1).real() == doctest::Approx(0.75).epsilon(1e-12));

  // Entanglement vanishes in the theta -> 0 limit.
  const double negativity =
      -min_eigenvalue(partial_transpose(build_target_state(1e-4), Subsystem::A));
  CHECK(negativity < 1e-3);
}

TEST_CASE("expectation values of the Bell witness") {
  const Witness w = build_theta_witness(kPi / 4.0);
  CHECK(expectation(w, HermitianOp::identity(4) * 0.25) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(expectation(w, build_target_state(kPi / 4.0)) ==
        doctest::Approx(-0.5).epsilon(1e-13));

  Eigen::Matrix4cd zero_zero = Eigen::Matrix4cd::Zero();
  zero_zero(0, 0) = 1.0;
  CHECK(expectation(w, HermitianOp::from_matrix(zero_zero)) ==
        doctest::Approx(0.0).epsilon(1e-14));

  const Witness w6 = build_theta_witness(kPi / 6.0);
  CHECK(expectation(w6, build_target_state(kPi / 6.0)) ==
        doctest::Approx(-0.25).epsilon(1e-13));

  CHECK_THROWS_AS(expectation(w, HermitianOp::identity(4)),
                  std::invalid_argument);
}

TEST_CASE("assignment channel limits and reference value") {
  std::mt19937_64 rng(41);
  const HermitianOp rho = test::random_state(rng, 4);
  const AssignmentVector a{0.3, -0.2, 0.5};
  const AssignmentVector b{-0.1, 0.4, 0.2};

  CHECK((assignment_channel(rho, a, b, 1.0).mat() - rho.mat())
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  const HermitianOp at_zero = assignment_channel(rho, a, b, 0.0);
  CHECK((at_zero.mat() -
         tensor(alpha_operator(a), alpha_operator(b)).mat())
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  const Witness w = build_theta_witness(kPi / 4.0);
  const HermitianOp out = assignment_channel(build_target_state(kPi / 4.0),
                                             AssignmentVector{},
                                             AssignmentVector{}, 0.5);
  CHECK(expectation(w, out) == doctest::Approx(1.0 / 16.0).epsilon(1e-13));
  CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(assignment_channel(rho, a, b, 1.5), std::invalid_argument);
}

TEST_CASE("assignment channel is affine in the state") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianOp r1 = test::random_state(rng, 4);
    const HermitianOp r2 = test::random_state(rng, 4);
    const double p = std::uniform_real_distribution<double>(0, 1)(rng);
    const AssignmentVector a = test::random_valid_assignment(rng);
    const AssignmentVector b = test::random_valid_assignment(rng);
    const double eta = std::uniform_real_distribution<double>(0, 1)(rng);
    const HermitianOp mixed = HermitianOp::from_matrix(
        (p * r1.mat() + (1 - p) * r2.mat()).eval());
    const Eigen::Matrix4cd lhs = assignment_channel(mixed, a, b, eta).mat();
    const Eigen::Matrix4cd rhs =
        p * assignment_channel(r1, a, b, eta).mat() +
        (1 - p) * assignment_channel(r2, a, b, eta).mat();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("valid assignments preserve PSD and PPT") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    const HermitianOp rho = test::random_ppt_state(rng);
    const AssignmentVector a = test::random_valid_assignment(rng);
    const AssignmentVector b = test::random_valid_assignment(rng);
    const double eta = std::uniform_real_distribution<double>(0, 1)(rng);
    const HermitianOp out = assignment_channel(rho, a, b, eta);
    CHECK(min_eigenvalue(out) >= -1e-10);
    CHECK(min_eigenvalue(partial_transpose(out, Subsystem::A)) >= -1e-10);
  }
}

TEST_CASE("effective witness is the channel adjoint") {
  const Witness w = build_theta_witness(kPi / 4.0);
  CHECK((effective_witness(w, AssignmentVector{}, AssignmentVector{}, 1.0)
             .mat() -
         w.matrix.mat())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  for (double eta : {0.2, 0.5, 1.0 / std::sqrt(3.0), 0.9}) {
    const HermitianOp weff =
        effective_witness(w, AssignmentVector{}, AssignmentVector{}, eta);
    CHECK(min_eigenvalue(weff) ==
          doctest::Approx(0.25 - 0.75 * eta * eta).epsilon(1e-12));
  }

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> uni(0, 1);
  std::uniform_real_distribution<double> wide(-1.5, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const HermitianOp rho = test::random_state(rng, 4);
    const AssignmentVector a{wide(rng), wide(rng), wide(rng)};
    const AssignmentVector b{wide(rng), wide(rng), wide(rng)};
    const double eta = uni(rng);
    const double via_adjoint =
        (effective_witness(w, a, b, eta).mat() * rho.mat()).trace().real();
    const double via_channel =
        (w.matrix.mat() * assignment_channel(rho, a, b, eta).mat())
            .trace()
            .real();
    CHECK(std::abs(via_adjoint - via_channel) < 1e-10);
  }
}

TEST_CASE("Bell assignment value closed form") {
  for (double eta : {0.1, 0.4, 0.6, 0.8, 1.0}) {
    const AssignmentVector x100{1, 0, 0};
    CHECK(bell_assignment_value(x100, x100, eta) ==
          doctest::Approx(eta * (1 - 2 * eta) / 2.0).epsilon(1e-13));
    CHECK(bell_assignment_value(AssignmentVector{}, AssignmentVector{}, eta) ==
          doctest::Approx(0.25 - 0.75 * eta * eta).epsilon(1e-13));
  }
  CHECK(bell_assignment_value(AssignmentVector{0.3, 0.7, -0.2},
                              AssignmentVector{-0.5, 0.1, 0.9}, 1.0) ==
        doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(bell_assignment_value(AssignmentVector{1, 0, 0},
                              AssignmentVector{1, 0, 0}, 0.6) < 0.0);

  // Consistency with the channel on the Bell state.
  std::mt19937_64 rng(59);
  const Witness w = build_theta_witness(kPi / 4.0);
  const HermitianOp bell = build_target_state(kPi / 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const AssignmentVector a = test::random_valid_assignment(rng);
    const AssignmentVector b = test::random_valid_assignment(rng);
    const double eta = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(bell_assignment_value(a, b, eta) ==
          doctest::Approx(expectation(w, assignment_channel(bell, a, b, eta)))
              .epsilon(1e-12));
  }
}

TEST_CASE("assignment validity") {
  CHECK(is_valid_assignment(AssignmentVector{}));
  CHECK(is_valid_assignment(AssignmentVector{1, 0, 0}));
  CHECK_FALSE(is_valid_assignment(AssignmentVector{1, 1, 1}));
  CHECK(is_valid_assignment(AssignmentVector{0.5, 0.5, 0.5}));
  CHECK_FALSE(is_valid_assignment(AssignmentVector{0.9, 0.5, 0.5}));
}
