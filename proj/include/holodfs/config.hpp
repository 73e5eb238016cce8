#pragma once

// Experiment configuration: strict JSON schema with full-path diagnostics,
// radian/degree key convention, canonical echo of the effective config, and
// JSON forms of pulses, targets, and coupling sets.

#include "holodfs/gates.hpp"
#include "holodfs/noise.hpp"
#include "holodfs/qubits.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace holodfs {

using Json = nlohmann::ordered_json;

// Raised for any malformed configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  verify_1q,
  verify_2q,
  synthesize_1q,
  synthesize_2q,
  noise_sweep,
  robustness_sweep,
  selftest,
};

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::verify_1q: return "verify_1q";
    case Experiment::verify_2q: return "verify_2q";
    case Experiment::synthesize_1q: return "synthesize_1q";
    case Experiment::synthesize_2q: return "synthesize_2q";
    case Experiment::noise_sweep: return "noise_sweep";
    case Experiment::robustness_sweep: return "robustness_sweep";
    case Experiment::selftest: return "selftest";
  }
  return "?";
}

inline Experiment experiment_from_string(const std::string& s,
                                         const std::string& where) {
  for (Experiment e :
       {Experiment::verify_1q, Experiment::verify_2q, Experiment::synthesize_1q,
        Experiment::synthesize_2q, Experiment::noise_sweep,
        Experiment::robustness_sweep, Experiment::selftest}) {
    if (s == to_string(e)) return e;
  }
  throw ConfigError(where + ": unknown experiment '" + s + "'");
}

enum class PulseKind { one_qubit, two_qubit };

struct NoiseStateSpec {
  int n = 3;
  int weight = 1;
  std::vector<std::string> bitstrings;  // nonempty: explicit superposition
};

struct ExperimentConfig {
  Experiment experiment = Experiment::selftest;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;  // condition-check tolerance
  std::string out_path;

  OneQubitPulse pulse1{};
  TwoQubitPulse pulse2{};
  PulseKind pulse_kind = PulseKind::one_qubit;
  int condition_d_grid_points = 0;  // 0: time-independent shortcut

  GateTarget target{};
  double energy_scale = 1.0;

  std::vector<double> kappa_grid;
  std::string quantity = "survival";  // or "gate_fidelity"
  DephasingChannel::Mode channel_mode = DephasingChannel::Mode::exact_sector;
  int samples = 100000;
  int trotter_steps = 100;
  bool bare_comparison = false;
  NoiseStateSpec state{};

  std::vector<double> epsilon_grid;
};

// ---------------------------------------------------------------------------
// Strict object walker
// ---------------------------------------------------------------------------

namespace detail {

// Wraps one JSON object; every accessor marks its key as consumed and
// finish() rejects whatever is left, so typos cannot pass silently.
class ObjectView {
 public:
  ObjectView(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j_->is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_->contains(key); }

  const Json* find(const std::string& key) {
    if (!j_->contains(key)) return nullptr;
    seen_.insert(key);
    return &j_->at(key);
  }

  const Json& at(const std::string& key) {
    const Json* v = find(key);
    if (!v) throw ConfigError(path_ + "." + key + ": missing required key");
    return *v;
  }

  double number(const std::string& key) { return as_number(at(key), key); }

  double number_or(const std::string& key, double fallback) {
    const Json* v = find(key);
    return v ? as_number(*v, key) : fallback;
  }

  // Accepts either <key> (radians) or <key>_deg (degrees), not both.
  double angle_or(const std::string& key, double fallback) {
    const bool rad = has(key);
    const bool deg = has(key + "_deg");
    if (rad && deg) {
      throw ConfigError(path_ + "." + key + ": give either " + key + " or " +
                        key + "_deg, not both");
    }
    if (deg) return number(key + "_deg") * pi / 180.0;
    if (rad) return number(key);
    return fallback;
  }

  std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v->get<std::int64_t>());
    }
    throw ConfigError(path_ + "." + key + ": expected a nonnegative integer");
  }

  int integer_or(const std::string& key, int fallback, int min_value) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      throw ConfigError(path_ + "." + key + ": expected an integer");
    }
    const auto value = v->get<std::int64_t>();
    if (value < min_value || value > 1'000'000'000) {
      throw ConfigError(path_ + "." + key + ": must be >= " +
                        std::to_string(min_value));
    }
    return static_cast<int>(value);
  }

  std::string str(const std::string& key) { return as_string(at(key), key); }

  std::string str_or(const std::string& key, const std::string& fallback) {
    const Json* v = find(key);
    return v ? as_string(*v, key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) {
    const Json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      throw ConfigError(path_ + "." + key + ": expected true or false");
    }
    return v->get<bool>();
  }

  std::vector<double> number_list(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_array()) {
      throw ConfigError(path_ + "." + key + ": expected an array of numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) {
        throw ConfigError(path_ + "." + key + ": expected an array of numbers");
      }
      const double d = item.get<double>();
      if (!std::isfinite(d)) {
        throw ConfigError(path_ + "." + key + ": values must be finite");
      }
      out.push_back(d);
    }
    return out;
  }

  void finish() {
    for (const auto& item : j_->items()) {
      if (!seen_.contains(item.key())) {
        throw ConfigError(path_ + "." + item.key() + ": unknown key");
      }
    }
  }

 private:
  double as_number(const Json& v, const std::string& key) const {
    if (!v.is_number()) {
      throw ConfigError(path_ + "." + key + ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw ConfigError(path_ + "." + key + ": must be finite");
    }
    return d;
  }

  std::string as_string(const Json& v, const std::string& key) const {
    if (!v.is_string()) {
      throw ConfigError(path_ + "." + key + ": expected a string");
    }
    return v.get<std::string>();
  }

  const Json* j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename P>
P config_validated(const P& pulse, const std::string& path) {
  try {
    return pulse.validated();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline OneQubitPulse parse_pulse_1q(ObjectView& parent) {
  const Json* p = parent.find("pulse");
  if (!p) return OneQubitPulse{};
  ObjectView v(*p, parent.path() + ".pulse");
  const double j = v.number_or("j", 1.0);
  if (!(j > 0)) throw ConfigError(v.path() + ".j: must be positive");
  OneQubitPulse pulse{j, v.angle_or("phi", 0.0), v.angle_or("theta", 0.0),
                      v.angle_or("varphi", 0.0), v.number_or("tau", pi / j)};
  v.finish();
  return config_validated(pulse, v.path());
}

inline TwoQubitPulse parse_pulse_2q(ObjectView& parent) {
  const Json* p = parent.find("pulse");
  if (!p) return TwoQubitPulse{};
  ObjectView v(*p, parent.path() + ".pulse");
  const double lambda = v.number_or("lambda", 1.0);
  if (!(lambda > 0)) throw ConfigError(v.path() + ".lambda: must be positive");
  TwoQubitPulse pulse{lambda, v.angle_or("zeta", 0.0), v.angle_or("alpha", 0.0),
                      v.angle_or("beta", 0.0), v.number_or("tau", pi / lambda)};
  v.finish();
  return config_validated(pulse, v.path());
}

inline GateTarget parse_target(ObjectView& parent) {
  ObjectView v(parent.at("target"), parent.path() + ".target");
  const std::vector<double> axis = v.number_list("axis");
  if (axis.size() != 3) {
    throw ConfigError(v.path() + ".axis: expected exactly 3 components");
  }
  GateTarget t;
  t.axis = Eigen::Vector3d(axis[0], axis[1], axis[2]);
  if (std::abs(t.axis.norm() - 1.0) > tol::structural) {
    throw ConfigError(v.path() + ".axis: must be a unit vector");
  }
  if (!v.has("gamma") && !v.has("gamma_deg")) {
    throw ConfigError(v.path() + ".gamma: missing required key");
  }
  t.gamma = v.angle_or("gamma", pi);
  if (!(t.gamma >= 0.0 && t.gamma <= 2 * pi)) {
    throw ConfigError(v.path() + ".gamma: must lie in [0, 2*pi]");
  }
  v.finish();
  return t;
}

inline PulseKind parse_pulse_kind(ObjectView& root) {
  const std::string kind = root.str_or("pulse_kind", "one_qubit");
  if (kind == "one_qubit") return PulseKind::one_qubit;
  if (kind == "two_qubit") return PulseKind::two_qubit;
  throw ConfigError(root.path() +
                    ".pulse_kind: expected one_qubit or two_qubit");
}

inline NoiseStateSpec parse_state_spec(ObjectView& root) {
  NoiseStateSpec spec;
  const Json* s = root.find("state");
  if (!s) return spec;
  ObjectView v(*s, root.path() + ".state");
  if (v.has("bitstrings")) {
    if (v.has("n") || v.has("weight")) {
      throw ConfigError(v.path() +
                        ": give either bitstrings or (n, weight), not both");
    }
    const Json& arr = v.at("bitstrings");
    if (!arr.is_array() || arr.empty()) {
      throw ConfigError(v.path() +
                        ".bitstrings: expected a nonempty array of strings");
    }
    for (const auto& item : arr) {
      if (!item.is_string()) {
        throw ConfigError(v.path() + ".bitstrings: expected strings");
      }
      spec.bitstrings.push_back(item.get<std::string>());
    }
    try {
      const BitString first = BitString::parse(spec.bitstrings.front());
      spec.n = first.size();
      for (const auto& s2 : spec.bitstrings) {
        if (BitString::parse(s2).size() != spec.n) {
          throw std::invalid_argument("lengths differ");
        }
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(v.path() + ".bitstrings: " + std::string(e.what()));
    }
    v.finish();
    return spec;
  }
  spec.n = v.integer_or("n", 3, 1);
  if (spec.n > 10) {
    throw ConfigError(v.path() + ".n: at most 10 qubits");
  }
  spec.weight = v.integer_or("weight", 1, 0);
  if (spec.weight > spec.n) {
    throw ConfigError(v.path() + ".weight: must be <= n");
  }
  v.finish();
  return spec;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parsing and canonical echo
// ---------------------------------------------------------------------------

inline ExperimentConfig parse_config(const Json& doc, Experiment experiment) {
  detail::ObjectView root(doc, "config");
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (const Json* e = root.find("experiment")) {
    if (!e->is_string()) {
      throw ConfigError("config.experiment: expected a string");
    }
    const Experiment named =
        experiment_from_string(e->get<std::string>(), "config.experiment");
    if (named != experiment) {
      throw ConfigError(std::string("config.experiment: '") +
                        to_string(named) +
                        "' does not match the requested subcommand '" +
                        to_string(experiment) + "'");
    }
  }
  cfg.seed = root.uint_or("seed", 0);
  cfg.tolerance = root.number_or("tolerance", 1e-10);
  if (!(cfg.tolerance > 0)) {
    throw ConfigError("config.tolerance: must be positive");
  }
  cfg.out_path = root.str_or("out", "");

  switch (experiment) {
    case Experiment::verify_1q:
      cfg.pulse1 = detail::parse_pulse_1q(root);
      cfg.condition_d_grid_points =
          root.integer_or("condition_d_grid_points", 0, 0);
      if (cfg.condition_d_grid_points == 1) {
        throw ConfigError(
            "config.condition_d_grid_points: need at least 2 grid points");
      }
      break;
    case Experiment::verify_2q:
      cfg.pulse2 = detail::parse_pulse_2q(root);
      cfg.condition_d_grid_points =
          root.integer_or("condition_d_grid_points", 0, 0);
      if (cfg.condition_d_grid_points == 1) {
        throw ConfigError(
            "config.condition_d_grid_points: need at least 2 grid points");
      }
      break;
    case Experiment::synthesize_1q:
    case Experiment::synthesize_2q:
      cfg.target = detail::parse_target(root);
      cfg.energy_scale = root.number_or("energy_scale", 1.0);
      if (!(cfg.energy_scale > 0)) {
        throw ConfigError("config.energy_scale: must be positive");
      }
      break;
    case Experiment::noise_sweep: {
      cfg.kappa_grid = root.number_list("kappa_t_grid");
      if (cfg.kappa_grid.empty()) {
        throw ConfigError("config.kappa_t_grid: must be nonempty");
      }
      for (double k : cfg.kappa_grid) {
        if (k < 0) {
          throw ConfigError("config.kappa_t_grid: values must be >= 0");
        }
      }
      cfg.quantity = root.str_or("quantity", "survival");
      if (cfg.quantity != "survival" && cfg.quantity != "gate_fidelity") {
        throw ConfigError(
            "config.quantity: expected survival or gate_fidelity");
      }
      if (const Json* ch = root.find("channel")) {
        detail::ObjectView v(*ch, "config.channel");
        const std::string mode = v.str_or("mode", "exact_sector");
        if (mode == "exact_sector") {
          cfg.channel_mode = DephasingChannel::Mode::exact_sector;
        } else if (mode == "monte_carlo") {
          cfg.channel_mode = DephasingChannel::Mode::monte_carlo;
        } else {
          throw ConfigError(
              "config.channel.mode: expected exact_sector or monte_carlo");
        }
        cfg.samples = v.integer_or("samples", 100000, 1);
        v.finish();
      }
      if (cfg.quantity == "survival") {
        cfg.state = detail::parse_state_spec(root);
      } else {
        cfg.pulse_kind = detail::parse_pulse_kind(root);
        if (cfg.pulse_kind == PulseKind::one_qubit) {
          cfg.pulse1 = detail::parse_pulse_1q(root);
        } else {
          cfg.pulse2 = detail::parse_pulse_2q(root);
        }
        cfg.trotter_steps = root.integer_or("trotter_steps", 100, 1);
        cfg.bare_comparison = root.boolean_or("bare_comparison", false);
        if (cfg.bare_comparison && cfg.pulse_kind == PulseKind::two_qubit) {
          throw ConfigError(
              "config.bare_comparison: only defined for one_qubit pulses");
        }
      }
      break;
    }
    case Experiment::robustness_sweep: {
      cfg.epsilon_grid = root.number_list("epsilon_grid");
      if (cfg.epsilon_grid.empty()) {
        throw ConfigError("config.epsilon_grid: must be nonempty");
      }
      cfg.pulse_kind = detail::parse_pulse_kind(root);
      if (cfg.pulse_kind == PulseKind::one_qubit) {
        cfg.pulse1 = detail::parse_pulse_1q(root);
      } else {
        cfg.pulse2 = detail::parse_pulse_2q(root);
      }
      break;
    }
    case Experiment::selftest:
      break;
  }
  root.finish();
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

inline Json pulse_to_json(const OneQubitPulse& p) {
  return Json{{"j", p.j},
              {"phi", p.phi},
              {"theta", p.theta},
              {"varphi", p.varphi},
              {"tau", p.tau}};
}

inline Json pulse_to_json(const TwoQubitPulse& p) {
  return Json{{"lambda", p.lambda},
              {"zeta", p.zeta},
              {"alpha", p.alpha},
              {"beta", p.beta},
              {"tau", p.tau}};
}

inline Json target_to_json(const GateTarget& t) {
  return Json{{"axis", {t.axis.x(), t.axis.y(), t.axis.z()}},
              {"gamma", t.gamma}};
}

inline Json coupling_set_to_json(const CouplingSet& c) {
  Json jx = Json::array();
  for (const auto& [key, value] : c.jx) {
    jx.push_back(Json{{"k", key.first}, {"l", key.second}, {"value", value}});
  }
  Json jy = Json::array();
  for (const auto& [key, value] : c.jy) {
    jy.push_back(Json{{"k", key.first}, {"l", key.second}, {"value", value}});
  }
  Json jz = Json::array();
  for (const auto& [site, value] : c.jz) {
    jz.push_back(Json{{"m", site}, {"value", value}});
  }
  return Json{{"n", c.n}, {"jx", jx}, {"jy", jy}, {"jz", jz}};
}

inline CouplingSet coupling_set_from_json(const Json& j) {
  detail::ObjectView root(j, "coupling_set");
  CouplingSet c;
  c.n = root.integer_or("n", 1, 1);
  auto read_pairs = [&](const std::string& key,
                        std::map<std::pair<int, int>, double>& into) {
    const Json* arr = root.find(key);
    if (!arr) return;
    if (!arr->is_array()) {
      throw ConfigError("coupling_set." + key + ": expected an array");
    }
    for (const auto& item : *arr) {
      detail::ObjectView v(item, "coupling_set." + key + "[]");
      const int k = v.integer_or("k", 0, 1);
      const int l = v.integer_or("l", 0, 1);
      const double value = v.number("value");
      v.finish();
      if (k >= l) {
        throw ConfigError("coupling_set." + key + ": keys must satisfy k < l");
      }
      into[{k, l}] = value;
    }
  };
  read_pairs("jx", c.jx);
  read_pairs("jy", c.jy);
  if (const Json* arr = root.find("jz")) {
    if (!arr->is_array()) {
      throw ConfigError("coupling_set.jz: expected an array");
    }
    for (const auto& item : *arr) {
      detail::ObjectView v(item, "coupling_set.jz[]");
      const int m = v.integer_or("m", 0, 1);
      const double value = v.number("value");
      v.finish();
      c.jz[m] = value;
    }
  }
  root.finish();
  return c;
}

// Full effective configuration (after defaults), echoed into every report.
inline Json effective_config(const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = to_string(cfg.experiment);
  j["seed"] = cfg.seed;
  j["tolerance"] = cfg.tolerance;
  if (!cfg.out_path.empty()) j["out"] = cfg.out_path;
  switch (cfg.experiment) {
    case Experiment::verify_1q:
      j["pulse"] = pulse_to_json(cfg.pulse1);
      if (cfg.condition_d_grid_points > 0) {
        j["condition_d_grid_points"] = cfg.condition_d_grid_points;
      }
      break;
    case Experiment::verify_2q:
      j["pulse"] = pulse_to_json(cfg.pulse2);
      if (cfg.condition_d_grid_points > 0) {
        j["condition_d_grid_points"] = cfg.condition_d_grid_points;
      }
      break;
    case Experiment::synthesize_1q:
    case Experiment::synthesize_2q:
      j["target"] = target_to_json(cfg.target);
      j["energy_scale"] = cfg.energy_scale;
      break;
    case Experiment::noise_sweep:
      j["kappa_t_grid"] = cfg.kappa_grid;
      j["quantity"] = cfg.quantity;
      j["channel"] =
          cfg.channel_mode == DephasingChannel::Mode::exact_sector
              ? Json{{"mode", "exact_sector"}}
              : Json{{"mode", "monte_carlo"}, {"samples", cfg.samples}};
      if (cfg.quantity == "survival") {
        if (!cfg.state.bitstrings.empty()) {
          j["state"] = Json{{"bitstrings", cfg.state.bitstrings}};
        } else {
          j["state"] = Json{{"n", cfg.state.n}, {"weight", cfg.state.weight}};
        }
      } else {
        j["pulse_kind"] =
            cfg.pulse_kind == PulseKind::one_qubit ? "one_qubit" : "two_qubit";
        j["pulse"] = cfg.pulse_kind == PulseKind::one_qubit
                         ? pulse_to_json(cfg.pulse1)
                         : pulse_to_json(cfg.pulse2);
        j["trotter_steps"] = cfg.trotter_steps;
        j["bare_comparison"] = cfg.bare_comparison;
      }
      break;
    case Experiment::robustness_sweep:
      j["epsilon_grid"] = cfg.epsilon_grid;
      j["pulse_kind"] =
          cfg.pulse_kind == PulseKind::one_qubit ? "one_qubit" : "two_qubit";
      j["pulse"] = cfg.pulse_kind == PulseKind::one_qubit
                       ? pulse_to_json(cfg.pulse1)
                       : pulse_to_json(cfg.pulse2);
      break;
    case Experiment::selftest:
      break;
  }
  return j;
}

}  // namespace holodfs
