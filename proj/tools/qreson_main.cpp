// Copyright (c) 2026 The qreson authors
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

#include <CLI11.hpp>

#include "qreson/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "qreson - resonance energies, decoherence rates and effective "
      "dynamics of a collectively coupled qubit register"};
  app.require_subcommand(1);

  std::string config_path;
  qreson::cli::Overrides overrides;
  std::string out_dir, elements, n_range;
  std::uint64_t seed = 0;
  double tol = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "override the recorded seed");
    cmd->add_option("--tol", tol, "override the crosscheck tolerance");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "emit the spectral table");
  CLI::App* rates = app.add_subcommand("rates", "emit decay rates and chart");
  CLI::App* dynamics =
      app.add_subcommand("dynamics", "emit the effective trajectory");
  CLI::App* sweep = app.add_subcommand("sweep", "emit the N-scaling report");
  CLI::App* validate =
      app.add_subcommand("validate", "cross-check closed forms vs quadrature");
  for (CLI::App* cmd : {spectrum, rates, dynamics, sweep, validate}) {
    add_common(cmd);
  }
  dynamics->add_option("--elements", elements,
                       "comma-separated sigma+tau strings, e.g. \"+-+++-\"");
  sweep->add_option("--n-range", n_range, "register size range A..B");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : qreson::cli::kExitInputError;
  }

  if (!out_dir.empty()) overrides.out_dir = out_dir;
  if (seed != 0) overrides.seed = seed;
  if (tol != 0.0) overrides.tol = tol;
  if (!elements.empty()) overrides.elements = elements;
  if (!n_range.empty()) overrides.n_range = n_range;

  const std::string command = app.get_subcommands().front()->get_name();
  return qreson::cli::dispatch(command, config_path, overrides);
}
