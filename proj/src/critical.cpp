#include "uwit/critical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uwit {

namespace {

constexpr double kDetectGap = 2e-6;  // twice the solver residual gate

}  // namespace

double entangled_value(double theta, Strategy strategy,
                       const AssignmentVector& a, const AssignmentVector& b,
                       double eta) {
  const Witness w = build_theta_witness(theta);
  if (strategy == Strategy::discard) {
    // Conditioning on clicks cancels honest losses exactly.
    return expectation(w, build_target_state(theta));
  }
  return min_eigenvalue(effective_witness(w, a, b, eta));
}

double separable_minimum(double theta, Strategy strategy,
                         const AssignmentVector& a, const AssignmentVector& b,
                         double eta, const SolveOptions& opts) {
  const Witness w = build_theta_witness(theta);
  const ConicProgram prog = strategy == Strategy::discard
                                ? build_discard_program(w, eta)
                                : build_assignment_program(w, a, b, eta);
  const SolveReport rep = solve(prog, opts);
  if (rep.status != SolveStatus::optimal) {
    throw std::runtime_error(
        "separable_minimum: solver returned " +
        std::string(to_string(rep.status)) + " at eta = " +
        std::to_string(eta));
  }
  return rep.optimum;
}

CriticalResult find_critical_eta(double theta, Strategy strategy,
                                 const AssignmentVector& a,
                                 const AssignmentVector& b, double tol,
                                 const SolveOptions& opts, double bracket_lo,
                                 double bracket_hi) {
  if (!(tol >= 1e-6)) {
    throw std::invalid_argument("find_critical_eta: tol must be >= 1e-6");
  }
  if (!(bracket_lo >= 0.0) || !(bracket_hi <= 1.0) ||
      !(bracket_lo < bracket_hi)) {
    throw std::invalid_argument("find_critical_eta: bad bracket");
  }

  CriticalResult res;
  auto gap_at = [&](double eta) {
    const double sep = separable_minimum(theta, strategy, a, b, eta, opts);
    const double ent = entangled_value(theta, strategy, a, b, eta);
    res.curve.push_back({eta, sep, ent});
    ++res.iterations;
    return sep - ent;
  };
  auto check_monotone = [&] {
    std::vector<CurveSample> sorted = res.curve;
    std::sort(sorted.begin(), sorted.end(),
              [](const CurveSample& u, const CurveSample& v) {
                return u.eta < v.eta;
              });
    for (size_t i = 1; i < sorted.size(); ++i) {
      const double g_prev = sorted[i - 1].separable_min -
                            sorted[i - 1].entangled_value;
      const double g_here = sorted[i].separable_min -
                            sorted[i].entangled_value;
      if (g_here < g_prev - kDetectGap) {
        throw std::runtime_error(
            "find_critical_eta: separable-entangled gap is not monotone in "
            "eta (drop of " + std::to_string(g_prev - g_here) +
            " between eta = " + std::to_string(sorted[i - 1].eta) + " and " +
            std::to_string(sorted[i].eta) + ")");
      }
    }
  };

  double lo = bracket_lo;
  double hi = bracket_hi;
  const bool lo_detects = gap_at(lo) > kDetectGap;
  const bool hi_detects = gap_at(hi) > kDetectGap;
  check_monotone();
  if (lo_detects || !hi_detects) {
    throw std::runtime_error(
        std::string("find_critical_eta: no critical point in bracket [") +
        std::to_string(lo) + ", " + std::to_string(hi) + "]: detection is " +
        (lo_detects ? "possible over the whole bracket"
                    : "impossible at the upper end"));
  }

  while (hi - lo > tol && res.iterations < 60) {
    const double mid = 0.5 * (lo + hi);
    const bool detects = gap_at(mid) > kDetectGap;
    check_monotone();
    (detects ? hi : lo) = mid;
  }

  res.eta_crit = 0.5 * (lo + hi);
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  std::sort(res.curve.begin(), res.curve.end(),
            [](const CurveSample& u, const CurveSample& v) {
              return u.eta < v.eta;
            });
  return res;
}

}  // namespace uwit
