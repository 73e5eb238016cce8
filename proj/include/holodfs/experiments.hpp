#pragma once

// Experiment orchestration: each subcommand maps to one run_* function that
// assembles a report, optional CSV, and a pass/fail verdict. All output
// content is deterministic for a fixed config and seed.

#include "holodfs/config.hpp"
#include "holodfs/dfs.hpp"
#include "holodfs/gates.hpp"
#include "holodfs/noise.hpp"
#include "holodfs/report.hpp"
#include "holodfs/sampling.hpp"

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace holodfs {

struct RunResult {
  Json report;
  std::string csv;  // nonempty only for sweep experiments
  bool checks_passed = true;
  std::vector<std::string> summary;  // stdout lines
};

namespace detail {

inline std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

inline void add_check(Json& checks, bool& all_passed,
                      std::vector<std::string>& summary, Json check) {
  const bool passed = check.at("passed").get<bool>();
  all_passed = all_passed && passed;
  summary.push_back(check.at("name").get<std::string>() +
                    (passed ? ": pass" : ": FAIL") + " (max violation " +
                    brief(check.at("max_violation").get<double>()) +
                    ", tolerance " +
                    brief(check.at("tolerance").get<double>()) + ")");
  checks.push_back(std::move(check));
}

inline void append_worst_violation(const Json& checks,
                                   std::vector<std::string>& summary) {
  const Json* worst = nullptr;
  for (const auto& c : checks) {
    if (c.at("passed").get<bool>()) continue;
    if (!worst || c.at("max_violation").get<double>() >
                      worst->at("max_violation").get<double>()) {
      worst = &c;
    }
  }
  if (worst) {
    summary.push_back("worst violation: " +
                      worst->at("name").get<std::string>() + " at " +
                      brief(worst->at("max_violation").get<double>()) +
                      " (tolerance " +
                      brief(worst->at("tolerance").get<double>()) + ")");
  }
}

inline DephasingChannel make_channel(const ExperimentConfig& cfg,
                                     const QubitRegister& reg, double kappa_t,
                                     std::uint64_t row) {
  if (cfg.channel_mode == DephasingChannel::Mode::exact_sector) {
    return DephasingChannel::exact(reg, kappa_t);
  }
  return DephasingChannel::sampled(reg, kappa_t, cfg.samples, cfg.seed + row);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline RunResult run_verify_1q(const ExperimentConfig& cfg) {
  const OneQubitPulse p = cfg.pulse1;
  const LogicalEncoding enc = LogicalEncoding::one_qubit();
  const QubitRegister reg = enc.reg();
  const CouplingSet c = one_qubit_couplings(p);
  const Matrix h = build_hamiltonian(c);
  const Matrix u = propagator(c, p.tau);
  const OneQubitFrame frame = bright_dark_states(p, enc);
  const Subspace sector = enumerate_dephasing_dfs(reg)[1];
  const Subspace logical = enc.logical_subspace();

  RunResult rr;
  Json checks = Json::array();
  bool all = true;
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_a",
                                  check_condition_a({collective_z(reg)},
                                                    sector, cfg.tolerance)));
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_b",
                                  check_condition_b(h, sector, cfg.tolerance)));
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_c",
                                  check_condition_c(u, logical,
                                                    cfg.tolerance)));
  if (cfg.condition_d_grid_points > 0) {
    const auto times = default_time_grid(p.tau, cfg.condition_d_grid_points);
    detail::add_check(
        checks, all, rr.summary,
        check_to_json("condition_d",
                      check_condition_d(
                          h, logical, times,
                          [&](double t) { return expm_hermitian(h, t); },
                          cfg.tolerance)));
  } else {
    detail::add_check(checks, all, rr.summary,
                      check_to_json("condition_d",
                                    check_condition_d(h, logical,
                                                      cfg.tolerance)));
  }

  const Matrix frame_block =
      matrix_in_basis(u, {frame.ancilla, frame.bright, frame.dark});
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json(
                        "closed_form_u1",
                        max_norm(frame_block - closed_form_u1(p)),
                        cfg.tolerance));

  const double dark_residual = (h * frame.dark).norm();
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("dark_state_energy", dark_residual,
                                         tol::structural));

  const double g1 = gamma_one(p);
  const Matrix gate = logical_gate_1q(p);
  const Matrix ideal = ideal_gate_1q(p.theta, p.varphi, g1);
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("logical_gate_matches_ideal",
                                         max_norm(gate - ideal),
                                         cfg.tolerance));

  Json report = report_skeleton(cfg);
  Json results;
  results["gamma_1"] = g1;
  results["couplings"] = coupling_set_to_json(c);
  results["logical_gate"] = matrix_to_json(gate);
  results["dark_state_residual"] = dark_residual;
  report["results"] = std::move(results);
  report["checks"] = checks;
  report["passed"] = all;
  detail::append_worst_violation(checks, rr.summary);

  rr.report = std::move(report);
  rr.checks_passed = all;
  return rr;
}

inline RunResult run_verify_2q(const ExperimentConfig& cfg) {
  const TwoQubitPulse p = cfg.pulse2;
  const LogicalEncoding enc = LogicalEncoding::two_qubit();
  const QubitRegister reg = enc.reg();
  const CouplingSet c = two_qubit_couplings(p);
  const Matrix h = build_hamiltonian(c);
  const Matrix u = propagator(c, p.tau);
  const TwoQubitFrame frame = two_qubit_states(p, enc);
  const Subspace sector = enumerate_dephasing_dfs(reg)[2];
  const Subspace logical = enc.logical_subspace();

  RunResult rr;
  Json checks = Json::array();
  bool all = true;
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_a",
                                  check_condition_a({collective_z(reg)},
                                                    sector, cfg.tolerance)));
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_b",
                                  check_condition_b(h, sector, cfg.tolerance)));
  detail::add_check(checks, all, rr.summary,
                    check_to_json("condition_c",
                                  check_condition_c(u, logical,
                                                    cfg.tolerance)));
  if (cfg.condition_d_grid_points > 0) {
    const auto times = default_time_grid(p.tau, cfg.condition_d_grid_points);
    detail::add_check(
        checks, all, rr.summary,
        check_to_json("condition_d",
                      check_condition_d(
                          h, logical, times,
                          [&](double t) { return expm_hermitian(h, t); },
                          cfg.tolerance)));
  } else {
    detail::add_check(checks, all, rr.summary,
                      check_to_json("condition_d",
                                    check_condition_d(h, logical,
                                                      cfg.tolerance)));
  }

  const Matrix frame_block = matrix_in_basis(u, frame.closed_form_basis());
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json(
                        "closed_form_u2",
                        max_norm(frame_block - closed_form_u2(p)),
                        cfg.tolerance));

  const double dark_residual =
      std::max((h * frame.d1).norm(), (h * frame.d2).norm());
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("dark_state_energy", dark_residual,
                                         tol::structural));

  const double g2 = gamma_two(p);
  const Matrix gate = logical_gate_2q(p);
  const Matrix ideal = ideal_gate_2q(p.alpha, p.beta, g2);
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("controlled_rotation_form",
                                         max_norm(gate - ideal),
                                         cfg.tolerance));

  const LocalityResult loc = controlled_locality_test(gate);

  Json report = report_skeleton(cfg);
  Json results;
  results["gamma_2"] = g2;
  results["couplings"] = coupling_set_to_json(c);
  results["logical_gate"] = matrix_to_json(gate);
  results["dark_state_residual"] = dark_residual;
  results["entangling"] = Json{{"is_local", loc.is_local},
                               {"measure", loc.entangling_measure}};
  report["results"] = std::move(results);
  report["checks"] = checks;
  report["passed"] = all;
  detail::append_worst_violation(checks, rr.summary);

  rr.report = std::move(report);
  rr.checks_passed = all;
  return rr;
}

// ---------------------------------------------------------------------------
// synthesize
// ---------------------------------------------------------------------------

inline RunResult run_synthesize_1q(const ExperimentConfig& cfg) {
  const OneQubitPulse p = synthesize_1q(cfg.target, cfg.energy_scale);
  const CouplingSet c = one_qubit_couplings(p);
  const Matrix gate = logical_gate_1q(p);
  const Matrix ideal = ideal_gate_1q(p.theta, p.varphi, cfg.target.gamma);

  RunResult rr;
  Json checks = Json::array();
  bool all = true;
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("round_trip_fidelity",
                                         1.0 - fidelity_gate(ideal, gate),
                                         cfg.tolerance));
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json(
                        "gamma_reconstruction",
                        std::abs(gamma_one(p) - cfg.target.gamma),
                        tol::structural));

  Json report = report_skeleton(cfg);
  Json results;
  results["pulse"] = pulse_to_json(p);
  results["gamma_1"] = gamma_one(p);
  results["couplings"] = coupling_set_to_json(c);
  results["logical_gate"] = matrix_to_json(gate);
  report["results"] = std::move(results);
  report["checks"] = checks;
  report["passed"] = all;
  detail::append_worst_violation(checks, rr.summary);

  rr.report = std::move(report);
  rr.checks_passed = all;
  return rr;
}

inline RunResult run_synthesize_2q(const ExperimentConfig& cfg) {
  const TwoQubitPulse p =
      synthesize_2q(cfg.target.gamma, cfg.target.axis, cfg.energy_scale);
  const CouplingSet c = two_qubit_couplings(p);
  const Matrix gate = logical_gate_2q(p);
  const Matrix ideal = ideal_gate_2q(p.alpha, p.beta, cfg.target.gamma);
  const LocalityResult loc = controlled_locality_test(gate);

  RunResult rr;
  Json checks = Json::array();
  bool all = true;
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json("round_trip_fidelity",
                                         1.0 - fidelity_gate(ideal, gate),
                                         cfg.tolerance));
  detail::add_check(checks, all, rr.summary,
                    scalar_check_to_json(
                        "gamma_reconstruction",
                        std::abs(gamma_two(p) - cfg.target.gamma),
                        tol::structural));

  Json report = report_skeleton(cfg);
  Json results;
  results["pulse"] = pulse_to_json(p);
  results["gamma_2"] = gamma_two(p);
  results["couplings"] = coupling_set_to_json(c);
  results["logical_gate"] = matrix_to_json(gate);
  results["entangling"] = Json{{"is_local", loc.is_local},
                               {"measure", loc.entangling_measure}};
  report["results"] = std::move(results);
  report["checks"] = checks;
  report["passed"] = all;
  detail::append_worst_violation(checks, rr.summary);

  rr.report = std::move(report);
  rr.checks_passed = all;
  return rr;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

inline RunResult run_noise_sweep(const ExperimentConfig& cfg) {
  RunResult rr;
  Json rows = Json::array();
  std::vector<std::string> header;
  std::vector<std::vector<double>> csv_rows;

  if (cfg.quantity == "survival") {
    const QubitRegister reg(cfg.state.n);
    Vector psi;
    if (!cfg.state.bitstrings.empty()) {
      psi = Vector::Zero(reg.dim());
      for (const auto& s : cfg.state.bitstrings) {
        psi += basis_state(reg, s);
      }
      psi /= psi.norm();
    } else {
      Rng rng(cfg.seed);
      psi = random_sector_state(rng, reg, cfg.state.weight);
    }
    header = {"kappa_t", "fidelity"};
    for (std::size_t i = 0; i < cfg.kappa_grid.size(); ++i) {
      const double kt = cfg.kappa_grid[i];
      const DephasingChannel ch = detail::make_channel(cfg, reg, kt, i);
      const double f = dfs_survival(psi, ch);
      rows.push_back(Json{{"kappa_t", kt}, {"fidelity", f}});
      csv_rows.push_back({kt, f});
    }
  } else {
    const bool one_q = cfg.pulse_kind == PulseKind::one_qubit;
    const QubitRegister reg(one_q ? 3 : 6);
    const QubitRegister bare_reg(1);
    header = cfg.bare_comparison
                 ? std::vector<std::string>{"kappa_t", "fidelity",
                                            "bare_fidelity"}
                 : std::vector<std::string>{"kappa_t", "fidelity"};
    for (std::size_t i = 0; i < cfg.kappa_grid.size(); ++i) {
      const double kt = cfg.kappa_grid[i];
      const DephasingChannel ch = detail::make_channel(cfg, reg, kt, i);
      const double f =
          one_q ? gate_under_dephasing(cfg.pulse1, ch, cfg.trotter_steps)
                : gate_under_dephasing(cfg.pulse2, ch, cfg.trotter_steps);
      Json row{{"kappa_t", kt}, {"fidelity", f}};
      std::vector<double> csv_row{kt, f};
      if (cfg.bare_comparison) {
        const OneQubitPulse& p = cfg.pulse1;
        const GateTarget bare_target{
            Eigen::Vector3d(std::sin(p.theta) * std::cos(p.varphi),
                            std::sin(p.theta) * std::sin(p.varphi),
                            std::cos(p.theta)),
            gamma_one(p)};
        const DephasingChannel bare_ch =
            detail::make_channel(cfg, bare_reg, kt, i);
        const double fb = bare_gate_under_dephasing(bare_target, bare_ch,
                                                    cfg.trotter_steps, p.tau);
        row["bare_fidelity"] = fb;
        csv_row.push_back(fb);
      }
      rows.push_back(std::move(row));
      csv_rows.push_back(std::move(csv_row));
    }
  }

  Json report = report_skeleton(cfg);
  report["results"] = Json{{"rows", rows}};
  report["checks"] = Json::array();
  report["passed"] = true;
  rr.report = std::move(report);
  rr.csv = render_csv(header, csv_rows);
  rr.checks_passed = true;
  rr.summary.push_back(std::to_string(csv_rows.size()) + " grid points");
  return rr;
}

inline RunResult run_robustness_sweep(const ExperimentConfig& cfg) {
  std::variant<OneQubitPulse, TwoQubitPulse> pulse;
  if (cfg.pulse_kind == PulseKind::one_qubit) {
    pulse = cfg.pulse1;
  } else {
    pulse = cfg.pulse2;
  }
  const RobustnessSweep sweep = control_error_sweep(pulse, cfg.epsilon_grid);

  RunResult rr;
  Json rows = Json::array();
  std::vector<std::vector<double>> csv_rows;
  for (std::size_t i = 0; i < sweep.epsilons.size(); ++i) {
    rows.push_back(Json{{"epsilon", sweep.epsilons[i]},
                        {"fidelity", sweep.fidelities[i]}});
    csv_rows.push_back({sweep.epsilons[i], sweep.fidelities[i]});
  }

  Json checks = Json::array();
  bool all = true;
  for (std::size_t i = 0; i < sweep.epsilons.size(); ++i) {
    if (sweep.epsilons[i] == 0.0) {
      detail::add_check(checks, all, rr.summary,
                        scalar_check_to_json("zero_error_fidelity",
                                             std::abs(1.0 -
                                                      sweep.fidelities[i]),
                                             cfg.tolerance));
      break;
    }
  }

  Json report = report_skeleton(cfg);
  report["results"] = Json{{"rows", rows}};
  report["checks"] = checks;
  report["passed"] = all;
  detail::append_worst_violation(checks, rr.summary);
  rr.report = std::move(report);
  rr.csv = render_csv({"epsilon", "fidelity"}, csv_rows);
  rr.checks_passed = all;
  rr.summary.push_back(std::to_string(csv_rows.size()) + " grid points");
  return rr;
}

// Dispatch for everything except selftest, which lives in selftest.hpp.
inline RunResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::verify_1q: return run_verify_1q(cfg);
    case Experiment::verify_2q: return run_verify_2q(cfg);
    case Experiment::synthesize_1q: return run_synthesize_1q(cfg);
    case Experiment::synthesize_2q: return run_synthesize_2q(cfg);
    case Experiment::noise_sweep: return run_noise_sweep(cfg);
    case Experiment::robustness_sweep: return run_robustness_sweep(cfg);
    case Experiment::selftest:
      throw std::logic_error("run_experiment: selftest has its own runner");
  }
  throw std::logic_error("run_experiment: unreachable");
}

}  // namespace holodfs
