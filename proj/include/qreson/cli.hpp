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

#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "qreson/config.hpp"
#include "qreson/dynamics.hpp"
#include "qreson/svg.hpp"
#include "qreson/validate.hpp"

namespace qreson::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailure = 1;
inline constexpr int kExitInputError = 2;

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::string> elements;
  std::optional<std::string> n_range;  // "A..B"
};

namespace detail {

inline void apply_overrides(RunConfig& rc, const Overrides& ov) {
  if (ov.out_dir) rc.out_dir = *ov.out_dir;
  if (ov.seed) {
    rc.seed = *ov.seed;
    rc.sweep.seed = *ov.seed;
    if (rc.b_sampled) {
      SplitMix64 rng(rc.seed);
      for (int j = 0; j < rc.params.n; ++j) {
        rc.params.b_fields[j] = rng.uniform(rc.b_sample_min, rc.b_sample_max);
      }
    }
  }
  if (ov.tol) rc.tol.crosscheck = *ov.tol;
  if (ov.elements) {
    rc.dynamics.elements.clear();
    std::string token;
    std::istringstream in(*ov.elements);
    while (std::getline(in, token, ',')) {
      if (!token.empty()) {
        rc.dynamics.elements.push_back(
            cfg_detail::parse_element(token, rc.params.n));
      }
    }
  }
  if (ov.n_range) {
    const auto pos = ov.n_range->find("..");
    if (pos == std::string::npos) {
      throw ConfigError("--n-range", "expected A..B");
    }
    rc.sweep.n_min = std::stoi(ov.n_range->substr(0, pos));
    rc.sweep.n_max = std::stoi(ov.n_range->substr(pos + 2));
  }
}

inline Json artifact_header(const RunConfig& rc) {
  return Json{{"seed", rc.seed}, {"config", echo_config(rc)}};
}

inline std::string out_path(const RunConfig& rc, const std::string& name) {
  std::filesystem::create_directories(rc.out_dir);
  return (std::filesystem::path(rc.out_dir) / name).string();
}

inline TableOptions table_options(const RunConfig& rc) {
  TableOptions topt;
  topt.tol = rc.tol.grouping;
  topt.c0 = rc.tol.c0;
  return topt;
}

}  // namespace detail

inline int cmd_spectrum(RunConfig rc) {
  const SpectralTable table =
      build_spectral_table(rc.params, detail::table_options(rc));
  Json doc = detail::artifact_header(rc);
  doc["schema"] = "qreson/spectrum/v1";
  doc["spectrum"] = to_json(table);
  if (!table.generic) {
    doc["spectrum"]["warnings"].push_back(
        "register parameters are not generic: eigenvalue groups mix "
        "difference patterns");
  }
  write_json_file(detail::out_path(rc, "spectrum.json"), doc);
  return kExitOk;
}

inline int cmd_rates(RunConfig rc) {
  const SpectralTable table =
      build_spectral_table(rc.params, detail::table_options(rc));
  const CouplingScalars scalars(rc.params.form1, rc.params.form2,
                                rc.params.env(), rc.tol.quadrature,
                                rc.s1_reading);
  const RateReport report = decoherence_rates(table, rc.params, scalars);

  Json doc = detail::artifact_header(rc);
  doc["schema"] = "qreson/rates/v1";
  doc["rates"] = to_json(report);
  doc["rates"]["s1_thermal"] = scalars.s1_thermal_line();
  doc["rates"]["s1_positive"] = scalars.s1_positive_frequency();
  write_json_file(detail::out_path(rc, "rates.json"), doc);

  std::vector<std::pair<double, double>> bars;
  for (const GroupRates& gr : report.groups) bars.emplace_back(gr.e, gr.gamma);
  svg::emit_rates_chart(detail::out_path(rc, "rates.svg"), bars);
  return kExitOk;
}

inline int cmd_dynamics(RunConfig rc) {
  const SpectralTable table =
      build_spectral_table(rc.params, detail::table_options(rc));
  const CouplingScalars scalars(rc.params.form1, rc.params.form2,
                                rc.params.env(), rc.tol.quadrature,
                                rc.s1_reading);
  const ResonanceModel model =
      rc.params.interacting()
          ? build_resonance_model_numeric(table, rc.params, scalars)
          : build_resonance_model(table, rc.params, scalars);

  std::vector<double> times = rc.dynamics.times;
  if (times.empty()) {
    const RateReport rates = decoherence_rates(table, rc.params, scalars);
    times = default_time_grid(rates, rc.dynamics.grid_points);
  }
  const ReducedState rho0 = rc.initial_state();
  const Trajectory traj = propagate_effective(rho0, model, times);

  auto selected = rc.dynamics.elements;
  if (selected.empty()) {
    for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(model.dim()); ++s) {
      for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(model.dim()); ++t) {
        selected.emplace_back(SpinConfig::from_index(s, rc.params.n),
                              SpinConfig::from_index(t, rc.params.n));
      }
    }
  }

  std::ostringstream csv;
  csv << "# seed=" << rc.seed << "\n";
  csv << "# config=" << echo_config(rc).dump() << "\n";
  csv << "t,sigma,tau,re,im,abs\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    for (const auto& [sigma, tau] : selected) {
      const Complex v = traj.values[i](sigma.index(), tau.index());
      csv << format_number(traj.times[i]) << "," << sigma.to_string() << ","
          << tau.to_string() << "," << format_number(v.real()) << ","
          << format_number(v.imag()) << "," << format_number(std::abs(v))
          << "\n";
    }
  }
  write_text_file(detail::out_path(rc, "trajectory.csv"), csv.str());

  std::vector<svg::Series> series;
  const size_t plot_count = std::min<size_t>(selected.size(), 8);
  for (size_t k = 0; k < plot_count; ++k) {
    svg::Series s;
    s.label = selected[k].first.to_string() + "," + selected[k].second.to_string();
    for (size_t i = 0; i < traj.times.size(); ++i) {
      s.x.push_back(traj.times[i]);
      s.y.push_back(std::abs(
          traj.values[i](selected[k].first.index(), selected[k].second.index())));
    }
    series.push_back(std::move(s));
  }
  svg::emit_line_chart(detail::out_path(rc, "dynamics.svg"), series,
                       "matrix element magnitudes", "t", "|rho_(sigma,tau)|");
  return kExitOk;
}

inline int cmd_sweep(RunConfig rc) {
  const ScalingReport report = scaling_sweep(rc.params, rc.sweep);
  Json doc = detail::artifact_header(rc);
  doc["schema"] = "qreson/scaling/v1";
  doc["scaling"] = to_json(report);
  write_json_file(detail::out_path(rc, "scaling.json"), doc);

  svg::Series deph{"dephasing channel", {}, {}};
  svg::Series exch{"exchange channel", {}, {}};
  for (const SweepPoint& p : report.points) {
    deph.x.push_back(p.n);
    deph.y.push_back(p.max_gamma_dephasing);
    exch.x.push_back(p.n);
    exch.y.push_back(p.max_gamma_exchange);
  }
  std::vector<svg::Series> series;
  std::vector<double> slopes;
  if (rc.params.lambda1 != 0.0) {
    series.push_back(deph);
    slopes.push_back(report.dephasing_loglog.slope);
  }
  if (rc.params.lambda2 != 0.0) {
    series.push_back(exch);
    slopes.push_back(report.exchange_loglog.slope);
  }
  if (series.empty()) throw InvalidInputError("sweep with both couplings zero");
  svg::emit_scaling_chart(detail::out_path(rc, "scaling.svg"), series, slopes);
  return kExitOk;
}

inline int cmd_validate(RunConfig rc) {
  const ValidationReport report = validate_instance(
      rc.params, rc.tol.crosscheck, rc.tol.quadrature, detail::table_options(rc));

  Json checks = Json::array();
  for (const ValidationCheck& check : report.checks) {
    checks.push_back(Json{{"name", check.name},
                          {"pass", check.pass},
                          {"value", check.value},
                          {"threshold", check.threshold}});
  }
  Json crosschecks = Json::array();
  for (const CrosscheckReport& cc : report.crosschecks) {
    crosschecks.push_back(to_json(cc));
  }
  Json doc = detail::artifact_header(rc);
  doc["schema"] = "qreson/validate/v1";
  doc["tol"] = rc.tol.crosscheck;
  doc["pass"] = report.pass;
  doc["checks"] = std::move(checks);
  doc["crosschecks"] = std::move(crosschecks);
  doc["printed_radical_max_dev"] = report.printed_radical_max_dev;
  doc["s1_reading_gap"] = report.s1_reading_gap;
  write_json_file(detail::out_path(rc, "validate.json"), doc);

  std::cout << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kExitOk : kExitValidationFailure;
}

inline int dispatch(const std::string& command, const std::string& config_path,
                    const Overrides& overrides) {
  try {
    RunConfig rc = load_config_file(config_path);
    detail::apply_overrides(rc, overrides);
    if (command == "spectrum") return cmd_spectrum(std::move(rc));
    if (command == "rates") return cmd_rates(std::move(rc));
    if (command == "dynamics") return cmd_dynamics(std::move(rc));
    if (command == "sweep") return cmd_sweep(std::move(rc));
    if (command == "validate") return cmd_validate(std::move(rc));
    std::cerr << "unknown command '" << command << "'\n";
    return kExitInputError;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace qreson::cli
