#pragma once

// Report and CSV emission: shortest round-trip decimal text, deterministic
// key order, LF newlines. Identical inputs give byte-identical output.

#include "holodfs/config.hpp"
#include "holodfs/dfs.hpp"
#include "holodfs/linalg.hpp"
#include "holodfs/version.hpp"

#include <charconv>
#include <string>
#include <system_error>
#include <vector>

namespace holodfs {

// Shortest decimal text that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(row);
  }
  return rows;
}

// A named check with the worst witnesses; condition reports and scalar
// checks (fidelities, residual norms) share this shape.
inline Json check_to_json(const std::string& name, const ConditionReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back(Json{{"i", w.i}, {"j", w.j}, {"violation", w.violation}});
  }
  return Json{{"name", name},
              {"condition", std::string(1, r.condition)},
              {"max_violation", r.max_violation},
              {"tolerance", r.tolerance},
              {"passed", r.passed},
              {"witnesses", witnesses}};
}

inline Json scalar_check_to_json(const std::string& name, double violation,
                                 double tolerance) {
  return Json{{"name", name},
              {"max_violation", violation},
              {"tolerance", tolerance},
              {"passed", violation <= tolerance}};
}

// Report skeleton shared by every experiment.
inline Json report_skeleton(const ExperimentConfig& cfg) {
  Json report;
  report["holodfs_version"] = kVersion;
  report["experiment"] = to_string(cfg.experiment);
  report["config"] = effective_config(cfg);
  return report;
}

// Wall-clock timing stays on standard output; the report file must be
// byte-identical across reruns of the same config and seed.
inline std::string render_report(const Json& report) {
  return report.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string render_csv(const std::vector<std::string>& header,
                              const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace holodfs
