// Command-line front end: eta sweeps, critical-efficiency search,
// closed-form verification, and effective-witness floors, all emitting CSV
// suitable for plotting. Exit codes: 0 success, 1 check or solve failure,
// 2 usage error.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "uwit/commands.hpp"

namespace {

struct RawArgs {
  std::string strategy = "discard";
  std::string theta = "pi/4";
  std::string assign_a = "0,0,0";
  std::string assign_b = "0,0,0";
};

void add_common(CLI::App* cmd, RawArgs& raw, uwit::RunConfig& cfg,
                bool with_assign = true) {
  cmd->add_option("--strategy", raw.strategy, "discard or assignment")
      ->check(CLI::IsMember({"discard", "assignment"}));
  cmd->add_option("--theta", raw.theta,
                  "witness angle in (0, pi/4]; accepts pi/<n> or a decimal");
  if (with_assign) {
    cmd->add_option("--assign-a", raw.assign_a,
                    "Alice's no-click outcome bias, x,y,z");
    cmd->add_option("--assign-b", raw.assign_b,
                    "Bob's no-click outcome bias, x,y,z");
  }
  cmd->add_option("--tol", cfg.tolerance, "tolerance (bisection step for "
                  "critical, validation floor elsewhere)");
  cmd->add_option("--out", cfg.output_path, "output CSV path, - for stdout");
  cmd->add_flag("--verbose", cfg.verbose, "solver iteration log to stderr");
}

void add_grid(CLI::App* cmd, uwit::RunConfig& cfg) {
  cmd->add_option("--eta-start", cfg.eta_start, "grid start");
  cmd->add_option("--eta-stop", cfg.eta_stop, "grid stop");
  cmd->add_option("--eta-step", cfg.eta_step, "grid step");
}

int finalize(const RawArgs& raw, uwit::RunConfig& cfg) {
  cfg.strategy = raw.strategy == "assignment" ? uwit::Strategy::assignment
                                              : uwit::Strategy::discard;
  cfg.theta = uwit::parse_theta(raw.theta);
  cfg.assign_a = uwit::parse_assignment(raw.assign_a);
  cfg.assign_b = uwit::parse_assignment(raw.assign_b);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Worst-case separable bounds for entanglement witnesses measured with "
      "lossy, untrusted detectors"};
  app.require_subcommand(1);

  uwit::RunConfig sweep_cfg, critical_cfg, verify_cfg, floor_cfg;
  RawArgs sweep_raw, critical_raw, verify_raw, floor_raw;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "separable minimum vs eta as CSV");
  add_common(sweep, sweep_raw, sweep_cfg);
  add_grid(sweep, sweep_cfg);

  CLI::App* critical = app.add_subcommand(
      "critical", "bisect for the critical detection efficiency");
  critical_cfg.eta_start = 0.3;
  critical_cfg.eta_stop = 1.0;
  add_common(critical, critical_raw, critical_cfg);
  critical->add_option("--eta-start", critical_cfg.eta_start,
                       "bracket lower end");
  critical->add_option("--eta-stop", critical_cfg.eta_stop,
                       "bracket upper end");

  CLI::App* verify = app.add_subcommand(
      "verify", "certify the closed-form ensembles and solver agreement");
  verify_cfg.eta_start = 0.05;
  verify_cfg.eta_stop = 1.0;
  verify_cfg.eta_step = 0.05;
  verify_cfg.tolerance = 1e-8;
  add_common(verify, verify_raw, verify_cfg, /*with_assign=*/false);
  add_grid(verify, verify_cfg);
  verify->add_flag("--inject-perturbation", verify_cfg.inject_perturbation,
                   "self-test: perturb a closed-form ensemble weight and "
                   "expect the feasibility check to fail");

  CLI::App* floor_cmd = app.add_subcommand(
      "floor", "effective-witness minimum over entangled states vs eta");
  floor_raw.strategy = "assignment";
  add_common(floor_cmd, floor_raw, floor_cfg);
  add_grid(floor_cmd, floor_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      finalize(sweep_raw, sweep_cfg);
      return uwit::cmd_sweep(sweep_cfg);
    }
    if (critical->parsed()) {
      finalize(critical_raw, critical_cfg);
      return uwit::cmd_critical(critical_cfg);
    }
    if (verify->parsed()) {
      finalize(verify_raw, verify_cfg);
      return uwit::cmd_verify(verify_cfg);
    }
    if (floor_cmd->parsed()) {
      finalize(floor_raw, floor_cfg);
      return uwit::cmd_floor(floor_cfg);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
