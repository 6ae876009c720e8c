// Copyright 2026 The onerkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// oner_cli: scenario-driven front end.
//
//   oner_cli <command> --scenario <path> [--out <path>] [--unit-mode physical|scaled] [--verbose]
//
// Commands: steady-state, pulse, spectrum, rabi-map, coupled, efg-mesh,
// ingest-check. Exit codes: 0 success, 2 configuration error, 3 numerical
// failure, 4 data-ingestion error.

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "onerkit/cli/runners.hpp"

namespace {

using namespace onerkit;
using namespace onerkit::cli;

struct Common {
  std::string scenario;
  std::string out;
  std::string unit_mode;
  bool verbose = false;
  std::string table;  // ingest-check positional
  unsigned workers = 0;
};

int execute(const std::string& command, const Common& c) {
  const Log log{std::cerr, c.verbose};
  std::optional<Scenario> scenario;
  if (!c.scenario.empty()) {
    scenario = load_scenario(c.scenario);
    if (!c.unit_mode.empty()) scenario->unit_mode = parse_unit_mode(c.unit_mode);
  } else if (command != "ingest-check" || c.table.empty()) {
    throw Error(ErrorKind::Config, command + " needs --scenario");
  }

  std::ostringstream buf;
  if (command == "steady-state") run_steady_state(*scenario, buf, log);
  else if (command == "pulse") run_pulse(*scenario, buf, log);
  else if (command == "spectrum") run_spectrum(*scenario, buf, log);
  else if (command == "rabi-map") run_rabi_map(*scenario, buf, log, c.workers);
  else if (command == "coupled") run_coupled(*scenario, buf, log);
  else if (command == "efg-mesh") run_efg_mesh(*scenario, buf, log);
  else if (command == "ingest-check") {
    if (!c.table.empty()) run_ingest_check(c.table, buf, log);
    else run_ingest_check(*scenario, buf, log);
  }

  if (c.out.empty()) {
    std::cout << buf.str() << std::flush;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw Error(ErrorKind::Config, "cannot write '" + c.out + "'");
    f << buf.str();
    log.info("wrote " + c.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical nuclear electric resonance toolkit"};
  app.require_subcommand(1);
  Common common;

  const std::pair<const char*, const char*> commands[] = {
      {"steady-state", "steady-state density matrix of the driven two-level system"},
      {"pulse", "square-pulse two-level series and its Fourier coefficients"},
      {"spectrum", "first-order quadrupole-corrected line positions"},
      {"rabi-map", "Rabi frequencies over a theta x field sweep"},
      {"coupled", "coupled electronic-nuclear run with Rabi fit"},
      {"efg-mesh", "surface mesh of a tensor"},
      {"ingest-check", "validate an NQI-vs-field table"},
  };
  std::string chosen;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", common.scenario, "scenario JSON file");
    sub->add_option("--out", common.out, "output file (default stdout)");
    sub->add_option("--unit-mode", common.unit_mode, "override the scenario unit mode")
        ->check(CLI::IsMember({"physical", "scaled"}));
    sub->add_flag("--verbose", common.verbose, "extra notes on stderr");
    if (std::string(name) == "ingest-check") sub->add_option("table", common.table, "table file");
    if (std::string(name) == "rabi-map") sub->add_option("--workers", common.workers, "worker threads");
    sub->callback([&chosen, n = std::string(name)] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return execute(chosen, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
