#include "uwit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace uwit {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kEtaStar = 1.0 / std::sqrt(3.0);
const double kEtaThird = 1.0 / 3.0;

double snap_eta(double eta) {
  if (std::abs(eta - kEtaStar) < 1e-12) return kEtaStar;
  if (std::abs(eta - kEtaThird) < 1e-12) return kEtaThird;
  if (std::abs(eta - 1.0) < 1e-12) return 1.0;
  return eta;
}

bool is_bell_theta(double theta) { return std::abs(theta - kPi / 4.0) <= 1e-12; }

std::vector<double> eta_grid(const RunConfig& cfg) {
  std::vector<double> out;
  const int n =
      static_cast<int>(std::floor((cfg.eta_stop - cfg.eta_start) / cfg.eta_step +
                                  1e-9));
  for (int k = 0; k <= n; ++k) {
    double eta = cfg.eta_start + k * cfg.eta_step;
    if (eta > cfg.eta_stop + 1e-12) break;
    out.push_back(snap_eta(std::min(eta, cfg.eta_stop)));
  }
  return out;
}

int validate_common(const RunConfig& cfg, bool needs_grid) {
  if (!(cfg.theta > 0.0) || cfg.theta > kPi / 4.0 + 1e-15) {
    std::cerr << "error: theta must lie in (0, pi/4]\n";
    return 2;
  }
  if (needs_grid) {
    if (!(cfg.eta_step > 0.0) || cfg.eta_start < 0.0 || cfg.eta_stop > 1.0 ||
        cfg.eta_start > cfg.eta_stop) {
      std::cerr << "error: eta grid must satisfy 0 <= start <= stop <= 1 with "
                   "step > 0\n";
      return 2;
    }
  }
  if (!(cfg.tolerance >= 1e-8)) {
    std::cerr << "error: tolerance must be >= 1e-8\n";
    return 2;
  }
  return 0;
}

struct OutputFile {
  std::ofstream file;
  std::ostream* stream = nullptr;

  explicit OutputFile(const std::string& path) {
    if (path.empty() || path == "-") {
      stream = &std::cout;
    } else {
      file.open(path, std::ios::binary);
      if (!file) {
        throw std::runtime_error("cannot open output file '" + path + "'");
      }
      stream = &file;
    }
  }
  std::ostream& out() { return *stream; }
};

}  // namespace

double parse_theta(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.rfind("pi/", 0) == 0) {
    size_t pos = 0;
    const long den = std::stol(s.substr(3), &pos);
    if (pos != s.size() - 3 || den <= 0) {
      throw std::invalid_argument("cannot parse theta '" + text + "'");
    }
    return kPi / static_cast<double>(den);
  }
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) {
    throw std::invalid_argument("cannot parse theta '" + text + "'");
  }
  return v;
}

AssignmentVector parse_assignment(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  AssignmentVector a;
  if (!(is >> a.x >> a.y >> a.z)) {
    throw std::invalid_argument("cannot parse assignment triple '" + text +
                                "'");
  }
  std::string rest;
  if (is >> rest) {
    throw std::invalid_argument("cannot parse assignment triple '" + text +
                                "'");
  }
  return a;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

int cmd_sweep(const RunConfig& cfg) {
  if (int rc = validate_common(cfg, true)) return rc;
  OutputFile output(cfg.output_path);
  std::ostream& os = output.out();
  os << "eta,separable_min,entangled_value,oracle_value,residual\n";

  const Witness w = build_theta_witness(cfg.theta);
  const bool zero_assign = cfg.assign_a.is_zero() && cfg.assign_b.is_zero();
  SolveOptions solve_opts;
  solve_opts.verbose = cfg.verbose;
  bool all_ok = true;

  for (double eta : eta_grid(cfg)) {
    const ConicProgram prog =
        cfg.strategy == Strategy::discard
            ? build_discard_program(w, eta)
            : build_assignment_program(w, cfg.assign_a, cfg.assign_b, eta);
    const SolveReport rep = solve(prog, solve_opts);

    const double ent = entangled_value(cfg.theta, cfg.strategy, cfg.assign_a,
                                       cfg.assign_b, eta);
    std::string oracle;
    if (is_bell_theta(cfg.theta)) {
      if (cfg.strategy == Strategy::discard) {
        oracle = format_number(discard_bell_min(eta));
      } else if (zero_assign) {
        oracle = format_number(assignment_bell_min_zero(eta));
      }
    }
    const double residual =
        std::max({rep.residuals.max_equality_violation,
                  std::max(0.0, -rep.residuals.min_block_eigenvalue),
                  rep.residuals.duality_gap});

    if (rep.status == SolveStatus::optimal) {
      os << format_number(eta) << ',' << format_number(rep.optimum) << ','
         << format_number(ent) << ',' << oracle << ','
         << format_number(residual) << "\n";
    } else {
      all_ok = false;
      os << format_number(eta) << ",solver_failure(" << to_string(rep.status)
         << ")," << format_number(ent) << ',' << oracle << ','
         << format_number(residual) << "\n";
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_critical(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (int rc = validate_common(c, false)) return rc;
  if (!(c.tolerance >= 1e-6)) {
    std::cerr << "error: critical search tolerance must be >= 1e-6\n";
    return 2;
  }
  SolveOptions solve_opts;
  solve_opts.verbose = cfg.verbose;
  try {
    const CriticalResult res =
        find_critical_eta(c.theta, c.strategy, c.assign_a, c.assign_b,
                          c.tolerance, solve_opts, c.eta_start, c.eta_stop);
    std::cout << "eta_crit = " << format_number(res.eta_crit) << " (bracket ["
              << format_number(res.bracket_lo) << ", "
              << format_number(res.bracket_hi) << "], " << res.iterations
              << " probes)\n";
    if (!cfg.output_path.empty() && cfg.output_path != "-") {
      OutputFile output(cfg.output_path);
      output.out() << "eta,separable_min,entangled_value\n";
      for (const CurveSample& s : res.curve) {
        output.out() << format_number(s.eta) << ','
                     << format_number(s.separable_min) << ','
                     << format_number(s.entangled_value) << "\n";
      }
    }
    return 0;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_floor(const RunConfig& cfg) {
  if (cfg.strategy != Strategy::assignment) {
    std::cerr << "error: floor is defined for the assignment strategy only\n";
    return 2;
  }
  if (int rc = validate_common(cfg, true)) return rc;
  OutputFile output(cfg.output_path);
  std::ostream& os = output.out();
  os << "eta,entangled_floor,bell_state_value\n";
  const Witness w = build_theta_witness(cfg.theta);
  for (double eta : eta_grid(cfg)) {
    const double floor_value =
        min_eigenvalue(effective_witness(w, cfg.assign_a, cfg.assign_b, eta));
    const double bell_value =
        bell_assignment_value(cfg.assign_a, cfg.assign_b, eta);
    os << format_number(eta) << ',' << format_number(floor_value) << ','
       << format_number(bell_value) << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  RunConfig c = cfg;
  if (int rc = validate_common(c, true)) return rc;
  bool all_ok = true;
  auto report = [&](bool ok, const std::string& check,
                    const std::string& detail) {
    if (!ok) all_ok = false;
    std::cout << (ok ? "PASS" : "FAIL") << " check=" << check << " " << detail
              << "\n";
  };

  // Branch continuity of the closed forms and of the ensemble weights.
  {
    const double left = 0.25 - 1.0 / (4.0 * kEtaStar * kEtaStar);
    report(std::abs(left - (-0.5)) <= 1e-12, "branch_continuity",
           "strategy=discard eta=" + format_number(kEtaStar) +
               " |gap|=" + format_number(std::abs(left + 0.5)));
    const double aleft = 0.25 - 0.75 * kEtaStar * kEtaStar;
    report(std::abs(aleft - 0.0) <= 1e-12, "branch_continuity",
           "strategy=assignment eta=" + format_number(kEtaStar) +
               " |gap|=" + format_number(std::abs(aleft)));
    // Weights at eta = 1/3 from the two adjacent branch formulas.
    const double eta = kEtaThird;
    const double low[5] = {(1 - 3 * eta) * (1 - 3 * eta), 0.0, 0.0,
                           eta * eta / 2.0, eta - 2 * eta * eta};
    const double mid[5] = {0.0, 0.0, (1 - 3 * eta) * (1 - 3 * eta) / 6.0,
                           (6 * eta - 1 - 7 * eta * eta) / 4.0,
                           (1 - 3 * eta * eta) / 6.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(low[i] - mid[i]));
    report(worst <= 1e-12, "branch_continuity",
           "weights eta=1/3 max|diff|=" + format_number(worst));
  }

  std::vector<double> grid = eta_grid(c);
  for (double boundary : {kEtaThird, kEtaStar}) {
    if (boundary >= c.eta_start && boundary <= c.eta_stop) {
      grid.push_back(boundary);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const Witness bell = build_theta_witness(kPi / 4.0);
  SolveOptions solve_opts;
  solve_opts.verbose = cfg.verbose;

  for (double eta : grid) {
    if (!(eta > 0.0)) continue;
    for (Strategy strat : {Strategy::discard, Strategy::assignment}) {
      const std::string tag =
          std::string("strategy=") +
          (strat == Strategy::discard ? "discard" : "assignment") +
          " eta=" + format_number(eta);
      StrategyEnsemble ens = build_closed_form_ensemble(eta, strat);
      if (cfg.inject_perturbation) {
        // Self-test hook: bump one four-click family weight by 1e-3, which
        // must break the click-rate equalities.
        const ClickPattern target =
            ClickPattern::from_bits({1, 0, 0, 1, 1, 1});
        auto it = ens.find(target);
        const HermitianOp bumped = it == ens.end()
                                       ? rho_xx() * 1e-3
                                       : it->second + rho_xx() * 1e-3;
        if (it != ens.end()) ens.erase(it);
        ens.emplace(target, bumped);
      }
      const ConicProgram prog =
          strat == Strategy::discard
              ? build_discard_program(bell, eta)
              : build_assignment_program(bell, AssignmentVector{},
                                         AssignmentVector{}, eta);
      const FeasibilityReport fr = verify_feasibility(ens, prog);
      report(fr.max_equality_residual <= 1e-12 &&
                 fr.min_block_eigenvalue >= -1e-12,
             "ensemble_feasibility",
             tag + " max_residual=" + format_number(fr.max_equality_residual) +
                 " min_eig=" + format_number(fr.min_block_eigenvalue));
      const double closed = strat == Strategy::discard
                                ? discard_bell_min(eta)
                                : assignment_bell_min_zero(eta);
      report(std::abs(fr.objective - closed) <= 1e-12, "ensemble_objective",
             tag + " objective=" + format_number(fr.objective) +
                 " closed_form=" + format_number(closed));
      const SolveReport rep = solve(prog, solve_opts);
      const bool agree = rep.status == SolveStatus::optimal &&
                         std::abs(rep.optimum - closed) <= 1e-5;
      report(agree, "solver_agreement",
             tag + " status=" + to_string(rep.status) +
                 " optimum=" + format_number(rep.optimum) +
                 " closed_form=" + format_number(closed));
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace uwit
