#include "holodfs/experiments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

using namespace holodfs;
using Catch::Matchers::ContainsSubstring;

namespace {

Json doc(const char* text) { return Json::parse(text); }

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : s) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(current);
  return lines;
}

}  // namespace

TEST_CASE("format_double emits shortest round-trip text", "[harness]") {
  REQUIRE(format_double(0.1) == "0.1");
  REQUIRE(format_double(0.5) == "0.5");
  REQUIRE(format_double(3.0) == "3");
  REQUIRE(format_double(1e-10) == "1e-10");
  REQUIRE(format_double(-2.5) == "-2.5");
  for (double v : {3.141592653589793, 1.0 / 3.0, 1e300,
                   2.2250738585072014e-308, 12345.6789, -0.0}) {
    REQUIRE(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("render_csv uses LF and shortest decimals", "[harness]") {
  REQUIRE(render_csv({"a", "b"}, {}) == "a,b\n");
  const std::string out =
      render_csv({"x", "y"}, {{0.5, 1.0}, {-0.25, 1e-10}});
  REQUIRE(out == "x,y\n0.5,1\n-0.25,1e-10\n");
  REQUIRE(out.find('\r') == std::string::npos);
}

TEST_CASE("matrix_to_json stores re/im pairs row by row", "[harness]") {
  Matrix m(1, 2);
  m << Complex(1.0, -2.0), Complex(0.0, 0.5);
  const Json j = matrix_to_json(m);
  REQUIRE(j.size() == 1);
  REQUIRE(j[0][0][0].get<double>() == 1.0);
  REQUIRE(j[0][0][1].get<double>() == -2.0);
  REQUIRE(j[0][1][1].get<double>() == 0.5);
}

TEST_CASE("experiment names round trip", "[harness]") {
  for (Experiment e :
       {Experiment::verify_1q, Experiment::verify_2q, Experiment::synthesize_1q,
        Experiment::synthesize_2q, Experiment::noise_sweep,
        Experiment::robustness_sweep, Experiment::selftest}) {
    REQUIRE(experiment_from_string(to_string(e), "here") == e);
  }
  REQUIRE_THROWS_AS(experiment_from_string("bogus", "here"), ConfigError);
}

TEST_CASE("config defaults and common keys", "[harness]") {
  const ExperimentConfig cfg =
      parse_config(Json::object(), Experiment::verify_1q);
  REQUIRE(cfg.seed == 0);
  REQUIRE(cfg.tolerance == 1e-10);
  REQUIRE(cfg.out_path.empty());
  REQUIRE(cfg.pulse1.j == 1.0);
  REQUIRE(cfg.pulse1.tau == pi);
  REQUIRE(cfg.condition_d_grid_points == 0);

  const ExperimentConfig with_common = parse_config(
      doc(R"({"seed": 7, "tolerance": 1e-9, "out": "r.json"})"),
      Experiment::verify_1q);
  REQUIRE(with_common.seed == 7);
  REQUIRE(with_common.tolerance == 1e-9);
  REQUIRE(with_common.out_path == "r.json");
}

TEST_CASE("config rejects unknown keys with full paths", "[harness]") {
  REQUIRE_THROWS_WITH(parse_config(doc(R"({"pulses": {}})"),
                                   Experiment::verify_1q),
                      ContainsSubstring("config.pulses"));
  REQUIRE_THROWS_WITH(
      parse_config(doc(R"({"pulse": {"thta": 1.0}})"), Experiment::verify_1q),
      ContainsSubstring("config.pulse.thta"));
  REQUIRE_THROWS_AS(parse_config(doc(R"({"seed": -3})"), Experiment::verify_1q),
                    ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"tolerance": 0})"), Experiment::verify_1q),
      ConfigError);
}

TEST_CASE("experiment key must match the subcommand", "[harness]") {
  REQUIRE_NOTHROW(parse_config(doc(R"({"experiment": "verify_1q"})"),
                               Experiment::verify_1q));
  REQUIRE_THROWS_WITH(parse_config(doc(R"({"experiment": "verify_2q"})"),
                                   Experiment::verify_1q),
                      ContainsSubstring("does not match"));
  REQUIRE_THROWS_WITH(parse_config(doc(R"({"experiment": "nonsense"})"),
                                   Experiment::verify_1q),
                      ContainsSubstring("unknown experiment"));
}

TEST_CASE("pulse parsing honors degree keys and validation", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"pulse": {"j": 2.0, "theta_deg": 90, "phi": 0.2}})"),
      Experiment::verify_1q);
  REQUIRE(cfg.pulse1.theta == Catch::Approx(pi / 2).margin(1e-12));
  REQUIRE(cfg.pulse1.tau == Catch::Approx(pi / 2).margin(1e-15));

  REQUIRE_THROWS_WITH(
      parse_config(doc(R"({"pulse": {"theta": 1.0, "theta_deg": 57}})"),
                   Experiment::verify_1q),
      ContainsSubstring("not both"));
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"pulse": {"j": 1.0, "tau": 1.0}})"),
                   Experiment::verify_1q),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"pulse": {"j": -1.0}})"), Experiment::verify_1q),
      ConfigError);
  REQUIRE_THROWS_AS(parse_config(doc(R"({"condition_d_grid_points": 1})"),
                                 Experiment::verify_1q),
                    ConfigError);
}

TEST_CASE("target parsing", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"target": {"axis": [0, 0, 1], "gamma_deg": 180}})"),
      Experiment::synthesize_1q);
  REQUIRE(cfg.target.gamma == Catch::Approx(pi).margin(1e-12));

  REQUIRE_THROWS_WITH(
      parse_config(doc(R"({"target": {"axis": [0, 0, 1]}})"),
                   Experiment::synthesize_1q),
      ContainsSubstring("gamma"));
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"target": {"axis": [1, 1], "gamma": 1}})"),
                   Experiment::synthesize_1q),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"target": {"axis": [1, 1, 0], "gamma": 1}})"),
                   Experiment::synthesize_1q),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"target": {"axis": [0, 0, 1], "gamma": 7.0}})"),
                   Experiment::synthesize_1q),
      ConfigError);
  REQUIRE_THROWS_AS(parse_config(doc(R"({})"), Experiment::synthesize_1q),
                    ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(
          doc(R"({"target": {"axis": [0,0,1], "gamma": 1}, "energy_scale": 0})"),
          Experiment::synthesize_1q),
      ConfigError);
}

TEST_CASE("noise sweep config branches", "[harness]") {
  const ExperimentConfig survival = parse_config(
      doc(R"({"kappa_t_grid": [0, 1], "state": {"bitstrings": ["010", "001"]}})"),
      Experiment::noise_sweep);
  REQUIRE(survival.quantity == "survival");
  REQUIRE(survival.state.n == 3);
  REQUIRE(survival.state.bitstrings.size() == 2);

  const ExperimentConfig gate = parse_config(
      doc(R"({"kappa_t_grid": [1], "quantity": "gate_fidelity",
              "pulse_kind": "one_qubit", "pulse": {"theta": 1.0},
              "trotter_steps": 10, "bare_comparison": true,
              "channel": {"mode": "monte_carlo", "samples": 500}})"),
      Experiment::noise_sweep);
  REQUIRE(gate.channel_mode == DephasingChannel::Mode::monte_carlo);
  REQUIRE(gate.samples == 500);
  REQUIRE(gate.trotter_steps == 10);
  REQUIRE(gate.bare_comparison);

  REQUIRE_THROWS_AS(parse_config(doc(R"({})"), Experiment::noise_sweep),
                    ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": []})"), Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [-1]})"), Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [1], "quantity": "other"})"),
                   Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(
          doc(R"({"kappa_t_grid": [1], "state": {"bitstrings": ["01", "001"]}})"),
          Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(
          doc(R"({"kappa_t_grid": [1], "state": {"bitstrings": ["01"], "n": 2}})"),
          Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [1], "state": {"n": 2, "weight": 3}})"),
                   Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [1], "quantity": "gate_fidelity",
                          "pulse_kind": "two_qubit", "bare_comparison": true})"),
                   Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [1],
                          "channel": {"mode": "other"}})"),
                   Experiment::noise_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"kappa_t_grid": [1],
                          "channel": {"mode": "monte_carlo", "samples": 0}})"),
                   Experiment::noise_sweep),
      ConfigError);
}

TEST_CASE("robustness sweep config", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"epsilon_grid": [-0.05, 0, 0.05], "pulse_kind": "two_qubit",
              "pulse": {"zeta": 0.1, "alpha": 1.0}})"),
      Experiment::robustness_sweep);
  REQUIRE(cfg.pulse_kind == PulseKind::two_qubit);
  REQUIRE(cfg.pulse2.zeta == 0.1);
  REQUIRE(cfg.epsilon_grid.size() == 3);

  REQUIRE_THROWS_AS(
      parse_config(doc(R"({"epsilon_grid": []})"), Experiment::robustness_sweep),
      ConfigError);
  REQUIRE_THROWS_AS(parse_config(doc(R"({})"), Experiment::robustness_sweep),
                    ConfigError);
}

TEST_CASE("selftest config accepts only the common keys", "[harness]") {
  REQUIRE_NOTHROW(parse_config(doc(R"({"seed": 42})"), Experiment::selftest));
  REQUIRE_THROWS_WITH(
      parse_config(doc(R"({"pulse": {}})"), Experiment::selftest),
      ContainsSubstring("config.pulse"));
}

TEST_CASE("effective_config echo is a fixed point of parsing", "[harness]") {
  for (const auto& [text, experiment] :
       std::vector<std::pair<const char*, Experiment>>{
           {R"({"pulse": {"phi": 0.3, "theta": 1.1, "varphi": 0.7}})",
            Experiment::verify_1q},
           {R"({"pulse": {"zeta": -0.2, "alpha_deg": 45}, "seed": 5})",
            Experiment::verify_2q},
           {R"({"target": {"axis": [0, 1, 0], "gamma": 2.0}})",
            Experiment::synthesize_2q},
           {R"({"kappa_t_grid": [0, 1], "state": {"n": 4, "weight": 2}})",
            Experiment::noise_sweep},
           {R"({"kappa_t_grid": [1], "quantity": "gate_fidelity",
                "pulse_kind": "one_qubit", "pulse": {"theta": 1.0},
                "channel": {"mode": "monte_carlo", "samples": 77}})",
            Experiment::noise_sweep},
           {R"({"epsilon_grid": [0, 0.05], "pulse_kind": "one_qubit",
                "pulse": {"phi": 0.1}})",
            Experiment::robustness_sweep},
       }) {
    const Json echo = effective_config(parse_config(doc(text), experiment));
    const Json again = effective_config(parse_config(echo, experiment));
    REQUIRE(echo == again);
  }
}

TEST_CASE("coupling sets round trip through JSON", "[harness]") {
  const CouplingSet c =
      one_qubit_couplings(OneQubitPulse::with_rate(1.0, 0.3, 1.1, 0.7));
  const CouplingSet back = coupling_set_from_json(coupling_set_to_json(c));
  REQUIRE(back.n == c.n);
  REQUIRE(back.jx == c.jx);
  REQUIRE(back.jy == c.jy);
  REQUIRE(back.jz == c.jz);

  REQUIRE_THROWS_AS(
      coupling_set_from_json(
          doc(R"({"n": 2, "jx": [{"k": 2, "l": 1, "value": 1.0}]})")),
      ConfigError);
}

TEST_CASE("verify_1q runs green end to end", "[harness]") {
  ExperimentConfig cfg = parse_config(
      doc(R"({"pulse": {"phi": 0.3, "theta": 1.1, "varphi": 0.7}})"),
      Experiment::verify_1q);
  const RunResult rr = run_verify_1q(cfg);
  REQUIRE(rr.checks_passed);
  REQUIRE(rr.report.at("passed").get<bool>());
  REQUIRE(rr.report.at("checks").size() == 7);
  REQUIRE(rr.report.at("results").at("gamma_1").get<double>() ==
          Catch::Approx(pi + pi * std::sin(0.3)).margin(1e-12));
  REQUIRE(rr.csv.empty());
  REQUIRE(rr.summary.size() == 7);
  for (const auto& check : rr.report.at("checks")) {
    REQUIRE(check.at("passed").get<bool>());
  }

  // The explicit grid form of condition (d) agrees.
  cfg.condition_d_grid_points = 5;
  REQUIRE(run_verify_1q(cfg).checks_passed);
}

TEST_CASE("verify_2q reports the entangling measure", "[harness]") {
  const ExperimentConfig local = parse_config(
      doc(R"({"pulse": {"zeta": 0.15}})"), Experiment::verify_2q);
  const RunResult rl = run_verify_2q(local);
  REQUIRE(rl.checks_passed);
  REQUIRE(rl.report.at("results").at("entangling").at("is_local").get<bool>());

  const ExperimentConfig entangling = parse_config(
      doc(R"({"pulse": {"alpha_deg": 45}})"), Experiment::verify_2q);
  const RunResult re = run_verify_2q(entangling);
  REQUIRE(re.checks_passed);
  const Json& ent = re.report.at("results").at("entangling");
  REQUIRE_FALSE(ent.at("is_local").get<bool>());
  REQUIRE(ent.at("measure").get<double>() > 0.1);
}

TEST_CASE("synthesis experiments pass their own checks", "[harness]") {
  const ExperimentConfig z = parse_config(
      doc(R"({"target": {"axis": [0, 0, 1], "gamma": 3.141592653589793}})"),
      Experiment::synthesize_1q);
  const RunResult rz = run_synthesize_1q(z);
  REQUIRE(rz.checks_passed);
  REQUIRE(rz.report.at("results").at("pulse").at("phi").get<double>() == 0.0);

  const ExperimentConfig two = parse_config(
      doc(R"({"target": {"axis": [1, 0, 0], "gamma": 1.5707963267948966}})"),
      Experiment::synthesize_2q);
  REQUIRE(run_synthesize_2q(two).checks_passed);
}

TEST_CASE("noise sweep emits matching CSV and JSON", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"kappa_t_grid": [0, 1, 10],
              "state": {"bitstrings": ["010", "001"]}})"),
      Experiment::noise_sweep);
  const RunResult rr = run_noise_sweep(cfg);
  REQUIRE(rr.checks_passed);
  const auto lines = split_lines(rr.csv);
  REQUIRE(lines.size() == 4);
  REQUIRE(lines[0] == "kappa_t,fidelity");
  REQUIRE(rr.csv.back() == '\n');
  const Json& rows = rr.report.at("results").at("rows");
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double f = rows[i].at("fidelity").get<double>();
    REQUIRE(f == Catch::Approx(1.0).margin(1e-12));
    const std::string expected_line =
        format_double(rows[i].at("kappa_t").get<double>()) + "," +
        format_double(f);
    REQUIRE(lines[i + 1] == expected_line);
  }
}

TEST_CASE("gate-fidelity sweep contrasts encoded and bare", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"kappa_t_grid": [0, 1], "quantity": "gate_fidelity",
              "pulse_kind": "one_qubit", "pulse": {"theta_deg": 90},
              "trotter_steps": 25, "bare_comparison": true})"),
      Experiment::noise_sweep);
  const RunResult rr = run_noise_sweep(cfg);
  const auto lines = split_lines(rr.csv);
  REQUIRE(lines[0] == "kappa_t,fidelity,bare_fidelity");
  const Json& rows = rr.report.at("results").at("rows");
  REQUIRE(rows[0].at("fidelity").get<double>() ==
          Catch::Approx(1.0).margin(1e-10));
  REQUIRE(rows[0].at("bare_fidelity").get<double>() ==
          Catch::Approx(1.0).margin(1e-10));
  REQUIRE(rows[1].at("fidelity").get<double>() >= 1.0 - 1e-8);
  REQUIRE(rows[1].at("bare_fidelity").get<double>() < 0.9);
}

TEST_CASE("monte carlo sweeps are reproducible and close to exact",
          "[harness]") {
  const char* text = R"({"seed": 11, "kappa_t_grid": [0.5],
                         "state": {"bitstrings": ["100", "011"]},
                         "channel": {"mode": "monte_carlo", "samples": 20000}})";
  const ExperimentConfig cfg = parse_config(doc(text), Experiment::noise_sweep);
  const RunResult a = run_noise_sweep(cfg);
  const RunResult b = run_noise_sweep(cfg);
  REQUIRE(render_report(a.report) == render_report(b.report));
  REQUIRE(a.csv == b.csv);

  const ExperimentConfig exact_cfg = parse_config(
      doc(R"({"kappa_t_grid": [0.5], "state": {"bitstrings": ["100", "011"]}})"),
      Experiment::noise_sweep);
  const double f_exact = run_noise_sweep(exact_cfg)
                             .report.at("results")
                             .at("rows")[0]
                             .at("fidelity")
                             .get<double>();
  const double f_mc =
      a.report.at("results").at("rows")[0].at("fidelity").get<double>();
  REQUIRE(std::abs(f_mc - f_exact) < 5e-2);
  // The two logical strings straddle sectors, so the coherence does decay.
  REQUIRE(f_exact == Catch::Approx(0.5 * (1 + std::exp(-1.0))).margin(1e-12));
}

TEST_CASE("robustness sweep checks the zero-error point", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"epsilon_grid": [-0.05, 0, 0.05], "pulse_kind": "one_qubit",
              "pulse": {"phi": 0.3, "theta": 1.0}})"),
      Experiment::robustness_sweep);
  const RunResult rr = run_robustness_sweep(cfg);
  REQUIRE(rr.checks_passed);
  REQUIRE(rr.report.at("checks").size() == 1);
  REQUIRE(rr.report.at("checks")[0].at("name").get<std::string>() ==
          "zero_error_fidelity");
  const Json& rows = rr.report.at("results").at("rows");
  REQUIRE(rows.size() == 3);
  REQUIRE(rows[1].at("fidelity").get<double>() ==
          Catch::Approx(1.0).margin(1e-12));
  const auto lines = split_lines(rr.csv);
  REQUIRE(lines[0] == "epsilon,fidelity");
  REQUIRE(lines.size() == 4);

  // Without a zero point there is nothing to check and the sweep still runs.
  ExperimentConfig no_zero = cfg;
  no_zero.epsilon_grid = {0.01, 0.02};
  const RunResult rn = run_robustness_sweep(no_zero);
  REQUIRE(rn.checks_passed);
  REQUIRE(rn.report.at("checks").empty());
}

TEST_CASE("reports are byte-identical across reruns", "[harness]") {
  const ExperimentConfig cfg = parse_config(
      doc(R"({"pulse": {"phi": 0.2, "theta": 0.9, "varphi": 3.0}})"),
      Experiment::verify_1q);
  REQUIRE(render_report(run_verify_1q(cfg).report) ==
          render_report(run_verify_1q(cfg).report));
}

TEST_CASE("run_experiment refuses the selftest shortcut", "[harness]") {
  ExperimentConfig cfg;
  cfg.experiment = Experiment::selftest;
  REQUIRE_THROWS_AS(run_experiment(cfg), std::logic_error);
  REQUIRE(run_experiment(parse_config(Json::object(), Experiment::verify_1q))
              .checks_passed);
}
