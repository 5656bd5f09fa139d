#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "linealloc/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"line allocation experiment runner"};
  app.set_version_flag("--version", std::string(linealloc::kToolVersion));

  std::string config_path, out_path, scenario_override;
  uint64_t seed_override = 0;
  int workers_override = 0;
  app.add_option("--config", config_path, "JSON scenario config")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "CSV output path (default stdout)");
  app.add_option("--seed", seed_override, "override config base seed");
  app.add_option("--workers", workers_override, "override worker count")
      ->check(CLI::PositiveNumber);
  app.add_option("--scenario", scenario_override, "override config scenario");
  CLI11_PARSE(app, argc, argv);

  nlohmann::json cfg;
  try {
    std::ifstream in(config_path);
    cfg = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: not parseable JSON: " << e.what() << "\n";
    return 2;
  }
  if (!scenario_override.empty()) cfg["scenario"] = scenario_override;
  if (app.count("--seed")) cfg["seed"] = seed_override;
  if (app.count("--workers")) cfg["workers"] = workers_override;

  linealloc::ScenarioResult result;
  try {
    result = linealloc::run_scenario(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::string csv = result.to_csv();
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 1;
    }
    out << csv;
  }
  if (!result.summary.empty()) std::cout << result.summary << "\n";
  return 0;
}
