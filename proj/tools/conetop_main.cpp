// Command line runner: executes a scenario file and reports outcomes.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "conetop/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact cone chart scenarios: build, verify, sample"};
  std::string scenario;
  std::uint64_t seed = 0;
  std::string out = "out";
  bool verbose = false;
  app.add_option("--scenario", scenario, "scenario file (JSON)")->required();
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_option("--out", out, "directory for reports and sample tables");
  app.add_flag("--verbose", verbose, "log each command and print full reports");
  CLI11_PARSE(app, argc, argv);
  try {
    conetop::ScenarioRun run = conetop::run_scenario(scenario, seed, out, verbose, std::cout);
    return run.pass() ? 0 : 1;
  } catch (const conetop::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
