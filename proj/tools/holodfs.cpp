// Command-line front end. Exit codes: 0 all checks passed, 1 a check
// failed, 2 configuration or I/O trouble.

#include "holodfs/holodfs.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct SubEntry {
  CLI::App* sub = nullptr;
  holodfs::Experiment experiment = holodfs::Experiment::selftest;
};

std::string default_report_path(holodfs::Experiment e) {
  return std::string("holodfs_") + holodfs::to_string(e) + "_report.json";
}

std::string csv_path_for(const std::string& report_path) {
  const std::string suffix = ".json";
  if (report_path.size() > suffix.size() &&
      report_path.compare(report_path.size() - suffix.size(), suffix.size(),
                          suffix) == 0) {
    return report_path.substr(0, report_path.size() - suffix.size()) + ".csv";
  }
  return report_path + ".csv";
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification of single-shot holonomic gates "
               "on dephasing-free encodings"};
  app.set_version_flag("--version", holodfs::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  const std::pair<const char*, holodfs::Experiment> kSubcommands[] = {
      {"verify-1q", holodfs::Experiment::verify_1q},
      {"verify-2q", holodfs::Experiment::verify_2q},
      {"synthesize-1q", holodfs::Experiment::synthesize_1q},
      {"synthesize-2q", holodfs::Experiment::synthesize_2q},
      {"noise-sweep", holodfs::Experiment::noise_sweep},
      {"robustness-sweep", holodfs::Experiment::robustness_sweep},
      {"selftest", holodfs::Experiment::selftest},
  };

  std::vector<SubEntry> subs;
  for (const auto& [name, experiment] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, holodfs::to_string(experiment));
    CLI::Option* config =
        sub->add_option("--config", config_path, "experiment description (JSON)")
            ->check(CLI::ExistingFile);
    if (experiment != holodfs::Experiment::selftest) {
      config->required();
    }
    sub->add_option("--out", out_path, "report file path");
    sub->add_option("--seed", seed, "override the configured seed");
    sub->add_option("--tolerance", tolerance, "override the configured tolerance")
        ->check(CLI::PositiveNumber);
    subs.push_back({sub, experiment});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const SubEntry* chosen = nullptr;
  for (const SubEntry& entry : subs) {
    if (entry.sub->parsed()) chosen = &entry;
  }
  if (chosen == nullptr) return 2;  // unreachable with require_subcommand(1)

  const auto start = std::chrono::steady_clock::now();

  holodfs::Json doc = holodfs::Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "holodfs: cannot read " << config_path << "\n";
      return 2;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    doc = holodfs::Json::parse(buffer.str(), nullptr, false);
    if (doc.is_discarded()) {
      std::cerr << "holodfs: " << config_path << " is not valid JSON\n";
      return 2;
    }
  }

  holodfs::RunResult result;
  std::string report_path;
  try {
    holodfs::ExperimentConfig cfg =
        holodfs::parse_config(doc, chosen->experiment);
    if (chosen->sub->count("--seed") > 0) cfg.seed = seed;
    if (chosen->sub->count("--tolerance") > 0) cfg.tolerance = tolerance;
    if (chosen->sub->count("--out") > 0) cfg.out_path = out_path;
    report_path = cfg.out_path.empty() ? default_report_path(chosen->experiment)
                                       : cfg.out_path;
    result = chosen->experiment == holodfs::Experiment::selftest
                 ? holodfs::run_selftest(cfg)
                 : holodfs::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "holodfs: " << e.what() << "\n";
    return 2;
  }

  if (!write_file(report_path, holodfs::render_report(result.report))) {
    std::cerr << "holodfs: cannot write " << report_path << "\n";
    return 2;
  }
  std::string csv_path;
  if (!result.csv.empty()) {
    csv_path = csv_path_for(report_path);
    if (!write_file(csv_path, result.csv)) {
      std::cerr << "holodfs: cannot write " << csv_path << "\n";
      return 2;
    }
  }

  for (const std::string& line : result.summary) {
    std::cout << line << "\n";
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  // Wall-clock time goes to stdout only; report files stay bit-reproducible.
  std::cout << "completed in " << elapsed.count() << " ms\n";
  std::cout << "report: " << report_path << "\n";
  if (!csv_path.empty()) {
    std::cout << "csv: " << csv_path << "\n";
  }
  return result.checks_passed ? 0 : 1;
}
