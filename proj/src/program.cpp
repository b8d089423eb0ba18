#include "uwit/program.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace uwit {

namespace {

constexpr double kClickRateTol = 1e-6;

std::string bit_string(const ClickPattern& p) {
  std::string s;
  for (int b : p.bits()) s += static_cast<char>('0' + b);
  return s;
}

LinearCombo compress(const std::vector<double>& dense) {
  LinearCombo out;
  for (int v = 0; v < static_cast<int>(dense.size()); ++v) {
    if (dense[v] != 0.0) out.push_back({v, dense[v]});
  }
  return out;
}

// Patterns that can carry mass. The equalities pin the total mass outside
// every Lambda^A_i / Lambda^B_j set to 1 - eta, so at eta = 1 every pattern
// with an unset bit is forced to trace zero, hence (being PSD) to the zero
// operator; at eta = 0 the same happens for every pattern with a set bit.
std::vector<ClickPattern> surviving_patterns(double eta) {
  const auto all = enumerate_patterns();
  if (eta >= 1.0) return {all.back()};
  if (eta <= 0.0) return {all.front()};
  return all;
}

struct BuilderContext {
  std::vector<ClickPattern> patterns;
  std::vector<int> group_of_code;  // -1 if the pattern was eliminated
  LambdaSets sets = lambda_sets();

  explicit BuilderContext(double eta)
      : patterns(surviving_patterns(eta)), group_of_code(64, -1) {
    for (int g = 0; g < static_cast<int>(patterns.size()); ++g) {
      group_of_code[patterns[g].code()] = g;
    }
  }

  int group(const ClickPattern& p) const { return group_of_code[p.code()]; }
};

void append_state_blocks(const BuilderContext& ctx, ConicProgram& prog) {
  for (int g = 0; g < static_cast<int>(ctx.patterns.size()); ++g) {
    BlockSpec state;
    state.label = "rho(" + bit_string(ctx.patterns[g]) + ")";
    for (int k = 0; k < 16; ++k) state.coeffs[k] = {{16 * g + k, 1.0}};
    prog.blocks.push_back(std::move(state));
  }
  for (int g = 0; g < static_cast<int>(ctx.patterns.size()); ++g) {
    BlockSpec pt;
    pt.label = "rho_ptA(" + bit_string(ctx.patterns[g]) + ")";
    for (int i = 0; i < 4; ++i) {
      // Transposing Alice's factor flips the sign of sigma_y components.
      const double sign = (i == 2) ? -1.0 : 1.0;
      for (int j = 0; j < 4; ++j) {
        const int k = pauli_index(i, j);
        pt.coeffs[k] = {{16 * g + k, sign}};
      }
    }
    prog.blocks.push_back(std::move(pt));
  }
}

void append_observed_block(const BuilderContext& ctx, double eta,
                           ConicProgram& prog) {
  BlockSpec obs;
  obs.label = "rho_observed";
  obs.offset[pauli_index(0, 0)] = 0.25;
  for (int i = 1; i <= 3; ++i) {
    for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
      const int g = ctx.group(p);
      if (g < 0) continue;
      obs.coeffs[pauli_index(i, 0)].push_back(
          {prog.var_index(g, i, 0), 1.0 / eta});
    }
    for (const ClickPattern& p : ctx.sets.set_b[i - 1]) {
      const int g = ctx.group(p);
      if (g < 0) continue;
      obs.coeffs[pauli_index(0, i)].push_back(
          {prog.var_index(g, 0, i), 1.0 / eta});
    }
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        if (!p.bob_clicks(j)) continue;
        const int g = ctx.group(p);
        if (g < 0) continue;
        obs.coeffs[pauli_index(i, j)].push_back(
            {prog.var_index(g, i, j), 1.0 / (eta * eta)});
      }
    }
  }
  prog.blocks.push_back(std::move(obs));
}

void append_click_rate_equalities(const BuilderContext& ctx, double eta,
                                  ConicProgram& prog) {
  const int n = prog.num_vars;
  auto trace_row = [&](const std::vector<ClickPattern>& set) {
    std::vector<double> dense(n, 0.0);
    for (const ClickPattern& p : set) {
      const int g = ctx.group(p);
      if (g >= 0) dense[prog.var_index(g, 0, 0)] += 4.0;
    }
    return dense;
  };
  for (int i = 1; i <= 3; ++i) {
    prog.equalities.push_back({"clickA[" + std::to_string(i) + "]",
                               compress(trace_row(ctx.sets.set_a[i - 1])),
                               eta});
  }
  for (int j = 1; j <= 3; ++j) {
    prog.equalities.push_back({"clickB[" + std::to_string(j) + "]",
                               compress(trace_row(ctx.sets.set_b[j - 1])),
                               eta});
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      std::vector<double> dense(n, 0.0);
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        if (!p.bob_clicks(j)) continue;
        const int g = ctx.group(p);
        if (g >= 0) dense[prog.var_index(g, 0, 0)] += 4.0;
      }
      prog.equalities.push_back({"clickAB[" + std::to_string(i) + "," +
                                     std::to_string(j) + "]",
                                 compress(dense), eta * eta});
    }
  }
  std::vector<double> total(n, 0.0);
  for (int g = 0; g < static_cast<int>(ctx.patterns.size()); ++g) {
    total[prog.var_index(g, 0, 0)] += 4.0;
  }
  prog.equalities.push_back({"total_trace", compress(total), 1.0});
}

ConicProgram make_base(const Witness&, Strategy strategy, double eta) {
  ConicProgram prog;
  prog.strategy = strategy;
  prog.eta = eta;
  BuilderContext ctx(eta);
  prog.patterns = ctx.patterns;
  prog.num_vars = 16 * static_cast<int>(ctx.patterns.size());
  append_state_blocks(ctx, prog);
  if (eta > 0.0) append_observed_block(ctx, eta, prog);
  append_click_rate_equalities(ctx, eta, prog);
  return prog;
}

}  // namespace

ConicProgram build_discard_program(const Witness& w, double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument(
        "discard program requires eta in (0, 1]; the conditioned objective "
        "is undefined at eta = 0");
  }
  ConicProgram prog = make_base(w, Strategy::discard, eta);
  BuilderContext ctx(eta);

  std::vector<double> obj(prog.num_vars, 0.0);
  prog.objective_constant = w.coeffs(0, 0);
  for (int i = 1; i <= 3; ++i) {
    if (w.coeffs(i, 0) != 0.0) {
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, i, 0)] += 4.0 * w.coeffs(i, 0) / eta;
      }
    }
    if (w.coeffs(0, i) != 0.0) {
      for (const ClickPattern& p : ctx.sets.set_b[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, 0, i)] += 4.0 * w.coeffs(0, i) / eta;
      }
    }
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (w.coeffs(i, j) == 0.0) continue;
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        if (!p.bob_clicks(j)) continue;
        const int g = ctx.group(p);
        if (g >= 0) {
          obj[prog.var_index(g, i, j)] += 4.0 * w.coeffs(i, j) / (eta * eta);
        }
      }
    }
  }
  prog.objective = compress(obj);
  return prog;
}

ConicProgram build_assignment_program(const Witness& w,
                                      const AssignmentVector& a,
                                      const AssignmentVector& b, double eta) {
  if (!(eta >= 0.0) || eta > 1.0) {
    throw std::invalid_argument("assignment program requires eta in [0, 1]");
  }
  ConicProgram prog = make_base(w, Strategy::assignment, eta);
  BuilderContext ctx(eta);
  const std::array<double, 4> av = {0.0, a.x, a.y, a.z};
  const std::array<double, 4> bv = {0.0, b.x, b.y, b.z};

  std::vector<double> obj(prog.num_vars, 0.0);
  prog.objective_constant = w.coeffs(0, 0);
  for (int i = 1; i <= 3; ++i) {
    if (w.coeffs(i, 0) != 0.0) {
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, i, 0)] += 4.0 * w.coeffs(i, 0);
      }
      for (const ClickPattern& p : ctx.sets.complement_a[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, 0, 0)] += 4.0 * w.coeffs(i, 0) * av[i];
      }
    }
    if (w.coeffs(0, i) != 0.0) {
      for (const ClickPattern& p : ctx.sets.set_b[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, 0, i)] += 4.0 * w.coeffs(0, i);
      }
      for (const ClickPattern& p : ctx.sets.complement_b[i - 1]) {
        const int g = ctx.group(p);
        if (g >= 0) obj[prog.var_index(g, 0, 0)] += 4.0 * w.coeffs(0, i) * bv[i];
      }
    }
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const double wij = w.coeffs(i, j);
      if (wij == 0.0) continue;
      for (const ClickPattern& p : enumerate_patterns()) {
        const int g = ctx.group(p);
        if (g < 0) continue;
        const bool in_a = p.alice_clicks(i);
        const bool in_b = p.bob_clicks(j);
        if (in_a && in_b) {
          obj[prog.var_index(g, i, j)] += 4.0 * wij;
        } else if (in_a) {
          obj[prog.var_index(g, i, 0)] += 4.0 * wij * bv[j];
        } else if (in_b) {
          obj[prog.var_index(g, 0, j)] += 4.0 * wij * av[i];
        } else {
          obj[prog.var_index(g, 0, 0)] += 4.0 * wij * av[i] * bv[j];
        }
      }
    }
  }
  prog.objective = compress(obj);

  // Marginal-consistency equalities: the click-conditioned marginal of one
  // party must be independent of whether the other party's detector clicks.
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      std::vector<double> dense(prog.num_vars, 0.0);
      for (const ClickPattern& p : ctx.sets.set_a[i - 1]) {
        const int g = ctx.group(p);
        if (g < 0) continue;
        if (!p.bob_clicks(j)) dense[prog.var_index(g, i, 0)] += 4.0;
        dense[prog.var_index(g, i, 0)] -= (1.0 - eta) * 4.0;
      }
      prog.equalities.push_back({"marginalA[" + std::to_string(i) + "," +
                                     std::to_string(j) + "]",
                                 compress(dense), 0.0});
    }
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      std::vector<double> dense(prog.num_vars, 0.0);
      for (const ClickPattern& p : ctx.sets.set_b[j - 1]) {
        const int g = ctx.group(p);
        if (g < 0) continue;
        if (!p.alice_clicks(i)) dense[prog.var_index(g, 0, j)] += 4.0;
        dense[prog.var_index(g, 0, j)] -= (1.0 - eta) * 4.0;
      }
      prog.equalities.push_back({"marginalB[" + std::to_string(i) + "," +
                                     std::to_string(j) + "]",
                                 compress(dense), 0.0});
    }
  }
  return prog;
}

HermitianOp observed_state(const StrategyEnsemble& ensemble, double eta) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument(
        "observed_state requires eta in (0, 1]: no click statistics exist "
        "at eta = 0");
  }
  const LambdaSets sets = lambda_sets();
  auto pauli_sum = [&](int i, int j, auto&& member) {
    double s = 0.0;
    for (const auto& [pattern, op] : ensemble) {
      if (member(pattern)) {
        s += (op.mat() * pauli_product(i, j)).trace().real();
      }
    }
    return s;
  };

  std::vector<std::string> violations;
  auto check = [&](double got, double expected, const std::string& name) {
    if (std::abs(got - expected) > kClickRateTol * std::max(1.0, expected)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s (got %.9g, expected %.9g)",
                    name.c_str(), got, expected);
      violations.emplace_back(buf);
    }
  };
  for (int i = 1; i <= 3; ++i) {
    check(pauli_sum(0, 0, [&](const ClickPattern& p) {
            return p.alice_clicks(i);
          }),
          eta, "A[" + std::to_string(i) + "]");
    check(pauli_sum(0, 0, [&](const ClickPattern& p) {
            return p.bob_clicks(i);
          }),
          eta, "B[" + std::to_string(i) + "]");
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      check(pauli_sum(0, 0,
                      [&](const ClickPattern& p) {
                        return p.alice_clicks(i) && p.bob_clicks(j);
                      }),
            eta * eta, "AB[" + std::to_string(i) + "," + std::to_string(j) +
                           "]");
    }
  }
  if (!violations.empty()) {
    std::string msg = "click-rate constraints violated:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw std::invalid_argument(msg);
  }

  Eigen::Matrix4cd m = pauli_product(0, 0) / 4.0;
  for (int i = 1; i <= 3; ++i) {
    m += pauli_sum(i, 0,
                   [&](const ClickPattern& p) { return p.alice_clicks(i); }) /
         eta * pauli_product(i, 0) / 4.0;
    m += pauli_sum(0, i,
                   [&](const ClickPattern& p) { return p.bob_clicks(i); }) /
         eta * pauli_product(0, i) / 4.0;
  }
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      m += pauli_sum(i, j,
                     [&](const ClickPattern& p) {
                       return p.alice_clicks(i) && p.bob_clicks(j);
                     }) /
           (eta * eta) * pauli_product(i, j) / 4.0;
    }
  }
  return HermitianOp::from_matrix(m);
}

Eigen::VectorXd ensemble_to_vars(const ConicProgram& p,
                                 const StrategyEnsemble& ensemble) {
  std::vector<int> group_of_code(64, -1);
  for (int g = 0; g < static_cast<int>(p.patterns.size()); ++g) {
    group_of_code[p.patterns[g].code()] = g;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(p.num_vars);
  for (const auto& [pattern, op] : ensemble) {
    const int g = group_of_code[pattern.code()];
    if (g < 0) {
      if (op.mat().cwiseAbs().maxCoeff() > 1e-14) {
        throw std::invalid_argument(
            "ensemble_to_vars: nonzero operator on pattern " +
            std::to_string(pattern.code()) +
            ", which the program eliminated");
      }
      continue;
    }
    const PauliCoeffs c = pauli_expand(op);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x[p.var_index(g, i, j)] = c(i, j);
  }
  return x;
}

StrategyEnsemble vars_to_ensemble(const ConicProgram& p,
                                  const Eigen::VectorXd& x) {
  StrategyEnsemble out;
  for (int g = 0; g < static_cast<int>(p.patterns.size()); ++g) {
    PauliCoeffs c;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) c(i, j) = x[p.var_index(g, i, j)];
    out.emplace(p.patterns[g], pauli_assemble(c));
  }
  return out;
}

double objective_value(const ConicProgram& p, const Eigen::VectorXd& x) {
  double v = p.objective_constant;
  for (const LinearTerm& t : p.objective) v += t.weight * x[t.var];
  return v;
}

std::vector<double> equality_residuals(const ConicProgram& p,
                                       const Eigen::VectorXd& x) {
  std::vector<double> out;
  out.reserve(p.equalities.size());
  for (const Equality& eq : p.equalities) {
    double lhs = 0.0;
    for (const LinearTerm& t : eq.lhs) lhs += t.weight * x[t.var];
    out.push_back(std::abs(lhs - eq.rhs) / std::max(1.0, std::abs(eq.rhs)));
  }
  return out;
}

HermitianOp assemble_block(const ConicProgram& p, int block_index,
                           const Eigen::VectorXd& x) {
  const BlockSpec& blk = p.blocks.at(block_index);
  PauliCoeffs c;
  for (int k = 0; k < 16; ++k) {
    double v = blk.offset[k];
    for (const LinearTerm& t : blk.coeffs[k]) v += t.weight * x[t.var];
    c(k / 4, k % 4) = v;
  }
  return pauli_assemble(c);
}

std::string export_sdpa_sparse(const ConicProgram& p) {
  std::ostringstream os;
  const int m = static_cast<int>(p.equalities.size());
  os << "* conic program export; minimize c'x subject to sum_i x_i F_i - F0 "
        ">= 0\n";
  os << "* blocks: " << p.patterns.size() << " state blocks (pattern code "
     << "ascending), " << p.patterns.size()
     << " partial-transpose blocks, observed-state block"
     << (p.blocks.size() == 2 * p.patterns.size() ? " omitted (eta = 0)" : "")
     << ", then one diagonal block with paired entries (+row, -row) per "
        "equality\n";
  os << "* complex Hermitian blocks appear as 8x8 real embeddings; objective "
        "constant "
     << p.objective_constant << " is not representable in this format\n";
  os << p.num_vars << "\n";
  os << p.blocks.size() + (m > 0 ? 1 : 0) << "\n";
  for (size_t b = 0; b < p.blocks.size(); ++b) os << "8 ";
  if (m > 0) os << -2 * m;
  os << "\n";
  std::vector<double> c(p.num_vars, 0.0);
  for (const LinearTerm& t : p.objective) c[t.var] = t.weight;
  for (int v = 0; v < p.num_vars; ++v) os << c[v] << (v + 1 < p.num_vars ? " " : "");
  os << "\n";

  char line[160];
  auto emit_embedded = [&](int matno, int blkno, const Eigen::MatrixXcd& h,
                           double scale) {
    const Eigen::MatrixXd e = real_embedding(h) * scale;
    for (int r = 0; r < e.rows(); ++r) {
      for (int col = r; col < e.cols(); ++col) {
        if (e(r, col) == 0.0) continue;
        std::snprintf(line, sizeof(line), "%d %d %d %d %.17g\n", matno, blkno,
                      r + 1, col + 1, e(r, col));
        os << line;
      }
    }
  };

  // F0 entries: the format subtracts F0, so block offsets enter negated and
  // equality right-hand sides enter directly.
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    Eigen::Matrix4cd off = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 16; ++k) {
      if (p.blocks[b].offset[k] != 0.0) {
        off += p.blocks[b].offset[k] * pauli_product(k / 4, k % 4);
      }
    }
    if (off.cwiseAbs().maxCoeff() > 0.0) {
      emit_embedded(0, static_cast<int>(b) + 1, off, -1.0);
    }
  }
  const int lp_block = static_cast<int>(p.blocks.size()) + 1;
  for (int e = 0; e < m; ++e) {
    const double rhs = p.equalities[e].rhs;
    if (rhs != 0.0) {
      std::snprintf(line, sizeof(line), "0 %d %d %d %.17g\n", lp_block,
                    2 * e + 1, 2 * e + 1, rhs);
      os << line;
      std::snprintf(line, sizeof(line), "0 %d %d %d %.17g\n", lp_block,
                    2 * e + 2, 2 * e + 2, -rhs);
      os << line;
    }
  }

  // F_i entries, one matrix per variable.
  for (int v = 0; v < p.num_vars; ++v) {
    for (size_t b = 0; b < p.blocks.size(); ++b) {
      Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
      bool any = false;
      for (int k = 0; k < 16; ++k) {
        for (const LinearTerm& t : p.blocks[b].coeffs[k]) {
          if (t.var == v) {
            f += t.weight * pauli_product(k / 4, k % 4);
            any = true;
          }
        }
      }
      if (any) emit_embedded(v + 1, static_cast<int>(b) + 1, f, 1.0);
    }
    for (int e = 0; e < m; ++e) {
      for (const LinearTerm& t : p.equalities[e].lhs) {
        if (t.var != v || t.weight == 0.0) continue;
        std::snprintf(line, sizeof(line), "%d %d %d %d %.17g\n", v + 1,
                      lp_block, 2 * e + 1, 2 * e + 1, t.weight);
        os << line;
        std::snprintf(line, sizeof(line), "%d %d %d %d %.17g\n", v + 1,
                      lp_block, 2 * e + 2, 2 * e + 2, -t.weight);
        os << line;
      }
    }
  }
  return os.str();
}

}  // namespace uwit
