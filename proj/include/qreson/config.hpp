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

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qreson/coupling.hpp"
#include "qreson/dynamics.hpp"
#include "qreson/json_io.hpp"
#include "qreson/spin.hpp"
#include "qreson/sweep.hpp"

namespace qreson {

struct Tolerances {
  double grouping = -1.0;    // <= 0: automatic
  double quadrature = 1e-10;
  double crosscheck = 1e-6;
  double c0 = 1.0;
};

struct DynamicsOptions {
  std::vector<double> times;  // empty selects the default grid
  std::vector<std::pair<SpinConfig, SpinConfig>> elements;  // empty = all
  std::string rho0_kind = "uniform_coherent";
  std::string rho0_sigma;           // for kind "basis"
  Eigen::MatrixXcd rho0_explicit;   // for kind "explicit"
  int grid_points = 64;
};

/// Fully resolved run configuration: samplers drawn, seed recorded.
struct RunConfig {
  RegisterParams params;
  std::uint64_t seed = 1;
  bool b_sampled = false;
  double b_sample_min = 0.5, b_sample_max = 1.5;
  Tolerances tol;
  DynamicsOptions dynamics;
  SweepOptions sweep;
  std::string out_dir = "out";
  S1Reading s1_reading = S1Reading::kThermalLine;

  ReducedState initial_state() const {
    if (dynamics.rho0_kind == "uniform_coherent") {
      return ReducedState::uniform_coherent(params.n);
    }
    if (dynamics.rho0_kind == "basis") {
      const SpinConfig sigma = SpinConfig::from_string(dynamics.rho0_sigma);
      if (sigma.size() != params.n) {
        throw ConfigError("dynamics.rho0.sigma", "length differs from n");
      }
      const int dim = 1 << params.n;
      Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
      rho(sigma.index(), sigma.index()) = 1.0;
      return ReducedState{std::move(rho)};
    }
    return ReducedState::checked(dynamics.rho0_explicit);
  }
};

namespace cfg_detail {

inline const Json& require(const Json& j, const std::string& key,
                           const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + key, "missing");
  return j.at(key);
}

inline double number(const Json& j, const std::string& key,
                     const std::string& path, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(path + key, "missing number");
  }
  if (!j.at(key).is_number()) throw ConfigError(path + key, "expected number");
  return j.at(key).get<double>();
}

inline FormFactor parse_form_factor(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected object");
  return FormFactor::make(
      number(j, "p", path + "."), number(j, "prefactor", path + "."),
      number(j, "cutoff_scale", path + "."),
      number(j, "phase", path + ".", 0.0));
}

inline std::pair<SpinConfig, SpinConfig> parse_element(const std::string& text,
                                                       int n) {
  std::string clean;
  for (char ch : text) {
    if (ch != ':' && ch != ' ') clean.push_back(ch);
  }
  if (static_cast<int>(clean.size()) != 2 * n) {
    throw ConfigError("elements",
                      "element '" + text + "' must hold 2N = " +
                          std::to_string(2 * n) + " spin characters");
  }
  return {SpinConfig::from_string(clean.substr(0, static_cast<size_t>(n))),
          SpinConfig::from_string(clean.substr(static_cast<size_t>(n)))};
}

}  // namespace cfg_detail

/// Parses and resolves a configuration document. Samplers are drawn with
/// the recorded seed, so the echoed configuration reproduces the run.
inline RunConfig parse_config(const Json& doc) {
  using cfg_detail::number;
  using cfg_detail::require;
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");

  RunConfig rc;
  const Json& reg = require(doc, "register", "");
  const int n = static_cast<int>(number(reg, "n", "register."));
  if (n < 1) throw ConfigError("register.n", "must be >= 1");
  rc.params.n = n;

  if (doc.contains("seed")) {
    rc.seed = doc.at("seed").get<std::uint64_t>();
  }

  // Couplings J: named pattern or explicit matrix.
  const Json& jblock = require(reg, "j", "register.");
  const std::string pattern =
      require(jblock, "pattern", "register.j.").get<std::string>();
  rc.params.j_matrix = Eigen::MatrixXd::Zero(n, n);
  if (pattern == "zero") {
    // nothing to do
  } else if (pattern == "nearest_neighbour") {
    const double coupling = number(jblock, "J", "register.j.");
    if (n > 1) {
      for (int j = 0; j < n; ++j) {
        rc.params.j_matrix(j, (j + 1) % n) = coupling;
      }
    }
  } else if (pattern == "explicit") {
    const Json& m = require(jblock, "matrix", "register.j.");
    if (!m.is_array() || static_cast<int>(m.size()) != n) {
      throw ConfigError("register.j.matrix", "expected n rows");
    }
    for (int i = 0; i < n; ++i) {
      const Json& row = m.at(static_cast<size_t>(i));
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        throw ConfigError("register.j.matrix", "expected n columns per row");
      }
      for (int j = 0; j < n; ++j) {
        rc.params.j_matrix(i, j) = row.at(static_cast<size_t>(j)).get<double>();
      }
    }
  } else {
    throw ConfigError("register.j.pattern",
                      "expected zero | nearest_neighbour | explicit");
  }

  // Magnetic fields: explicit values or a seeded uniform sampler.
  const Json& bblock = require(reg, "b", "register.");
  rc.params.b_fields = Eigen::VectorXd::Zero(n);
  if (bblock.contains("values")) {
    const Json& values = bblock.at("values");
    if (!values.is_array() || static_cast<int>(values.size()) != n) {
      throw ConfigError("register.b.values", "expected n entries");
    }
    for (int j = 0; j < n; ++j) {
      rc.params.b_fields[j] = values.at(static_cast<size_t>(j)).get<double>();
    }
  } else if (bblock.contains("sampler")) {
    const Json& sampler = bblock.at("sampler");
    const std::string kind =
        require(sampler, "kind", "register.b.sampler.").get<std::string>();
    if (kind != "uniform") {
      throw ConfigError("register.b.sampler.kind", "only 'uniform' supported");
    }
    rc.b_sampled = true;
    rc.b_sample_min = number(sampler, "min", "register.b.sampler.", 0.5);
    rc.b_sample_max = number(sampler, "max", "register.b.sampler.", 1.5);
    if (sampler.contains("seed")) {
      rc.seed = sampler.at("seed").get<std::uint64_t>();
    }
    SplitMix64 rng(rc.seed);
    for (int j = 0; j < n; ++j) {
      rc.params.b_fields[j] = rng.uniform(rc.b_sample_min, rc.b_sample_max);
    }
  } else {
    throw ConfigError("register.b", "expected 'values' or 'sampler'");
  }

  rc.params.beta = number(require(doc, "env", ""), "beta", "env.");
  const Json& couplings = require(doc, "couplings", "");
  rc.params.lambda1 = number(couplings, "lambda1", "couplings.");
  rc.params.lambda2 = number(couplings, "lambda2", "couplings.");
  rc.params.form1 = cfg_detail::parse_form_factor(require(doc, "form1", ""),
                                                  "form1");
  rc.params.form2 = cfg_detail::parse_form_factor(require(doc, "form2", ""),
                                                  "form2");
  try {
    rc.params.validate();
  } catch (const InvalidInputError& err) {
    throw ConfigError("register", err.what());
  }

  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    rc.tol.grouping = number(t, "grouping", "tolerances.", -1.0);
    rc.tol.quadrature = number(t, "quadrature", "tolerances.", 1e-10);
    rc.tol.crosscheck = number(t, "crosscheck", "tolerances.", 1e-6);
    rc.tol.c0 = number(t, "c0", "tolerances.", 1.0);
  }

  if (doc.contains("s1_reading")) {
    const std::string reading = doc.at("s1_reading").get<std::string>();
    if (reading == "thermal") {
      rc.s1_reading = S1Reading::kThermalLine;
    } else if (reading == "positive") {
      rc.s1_reading = S1Reading::kPositiveFrequency;
    } else {
      throw ConfigError("s1_reading", "expected thermal | positive");
    }
  }

  if (doc.contains("dynamics")) {
    const Json& dyn = doc.at("dynamics");
    if (dyn.contains("times")) {
      for (const Json& t : dyn.at("times")) {
        rc.dynamics.times.push_back(t.get<double>());
      }
    }
    if (dyn.contains("grid_points")) {
      rc.dynamics.grid_points = dyn.at("grid_points").get<int>();
    }
    if (dyn.contains("elements")) {
      for (const Json& el : dyn.at("elements")) {
        rc.dynamics.elements.push_back(
            cfg_detail::parse_element(el.get<std::string>(), n));
      }
    }
    if (dyn.contains("rho0")) {
      const Json& rho0 = dyn.at("rho0");
      rc.dynamics.rho0_kind =
          require(rho0, "kind", "dynamics.rho0.").get<std::string>();
      if (rc.dynamics.rho0_kind == "basis") {
        rc.dynamics.rho0_sigma =
            require(rho0, "sigma", "dynamics.rho0.").get<std::string>();
      } else if (rc.dynamics.rho0_kind == "explicit") {
        const Json& m = require(rho0, "matrix", "dynamics.rho0.");
        const int dim = 1 << n;
        if (static_cast<int>(m.size()) != dim) {
          throw ConfigError("dynamics.rho0.matrix", "expected 2^n rows");
        }
        rc.dynamics.rho0_explicit = Eigen::MatrixXcd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i) {
          for (int j = 0; j < dim; ++j) {
            const Json& cell = m.at(static_cast<size_t>(i)).at(static_cast<size_t>(j));
            rc.dynamics.rho0_explicit(i, j) =
                Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
          }
        }
      } else if (rc.dynamics.rho0_kind != "uniform_coherent") {
        throw ConfigError("dynamics.rho0.kind",
                          "expected uniform_coherent | basis | explicit");
      }
    }
  }

  rc.sweep.seed = rc.seed;
  if (doc.contains("sweep")) {
    const Json& sw = doc.at("sweep");
    rc.sweep.n_min = static_cast<int>(number(sw, "n_min", "sweep.", 1));
    rc.sweep.n_max = static_cast<int>(number(sw, "n_max", "sweep.", 6));
    rc.sweep.instances = static_cast<int>(number(sw, "instances", "sweep.", 10));
    rc.sweep.b_min = number(sw, "b_min", "sweep.", 0.5);
    rc.sweep.b_max = number(sw, "b_max", "sweep.", 1.5);
    if (sw.contains("seed")) rc.sweep.seed = sw.at("seed").get<std::uint64_t>();
  }

  if (doc.contains("output") && doc.at("output").contains("dir")) {
    rc.out_dir = doc.at("output").at("dir").get<std::string>();
  }
  return rc;
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& err) {
    throw ConfigError("<file>", std::string("parse error: ") + err.what());
  }
  return parse_config(doc);
}

/// The fully resolved configuration, echoed into every artifact. Feeding it
/// back through parse_config reproduces the identical run.
inline Json echo_config(const RunConfig& rc) {
  Json jm = Json::array();
  for (int i = 0; i < rc.params.n; ++i) {
    Json row = Json::array();
    for (int j = 0; j < rc.params.n; ++j) row.push_back(rc.params.j_matrix(i, j));
    jm.push_back(std::move(row));
  }
  Json b = Json::array();
  for (int j = 0; j < rc.params.n; ++j) b.push_back(rc.params.b_fields[j]);

  Json dyn = Json::object();
  dyn["grid_points"] = rc.dynamics.grid_points;
  if (!rc.dynamics.times.empty()) dyn["times"] = rc.dynamics.times;
  if (!rc.dynamics.elements.empty()) {
    Json els = Json::array();
    for (const auto& el : rc.dynamics.elements) {
      els.push_back(el.first.to_string() + el.second.to_string());
    }
    dyn["elements"] = std::move(els);
  }
  Json rho0 = Json::object();
  rho0["kind"] = rc.dynamics.rho0_kind;
  if (rc.dynamics.rho0_kind == "basis") rho0["sigma"] = rc.dynamics.rho0_sigma;
  if (rc.dynamics.rho0_kind == "explicit") {
    Json m = Json::array();
    for (int i = 0; i < rc.dynamics.rho0_explicit.rows(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < rc.dynamics.rho0_explicit.cols(); ++j) {
        row.push_back(Json::array({rc.dynamics.rho0_explicit(i, j).real(),
                                   rc.dynamics.rho0_explicit(i, j).imag()}));
      }
      m.push_back(std::move(row));
    }
    rho0["matrix"] = std::move(m);
  }
  dyn["rho0"] = std::move(rho0);

  const FormFactor& f1 = rc.params.form1;
  const FormFactor& f2 = rc.params.form2;
  return Json{
      {"seed", rc.seed},
      {"register",
       Json{{"n", rc.params.n},
            {"j", Json{{"pattern", "explicit"}, {"matrix", std::move(jm)}}},
            {"b", Json{{"values", std::move(b)}}}}},
      {"env", Json{{"beta", rc.params.beta}}},
      {"couplings", Json{{"lambda1", rc.params.lambda1},
                         {"lambda2", rc.params.lambda2}}},
      {"form1", Json{{"p", f1.p},
                     {"prefactor", f1.prefactor},
                     {"cutoff_scale", f1.cutoff_scale},
                     {"phase", f1.phase}}},
      {"form2", Json{{"p", f2.p},
                     {"prefactor", f2.prefactor},
                     {"cutoff_scale", f2.cutoff_scale},
                     {"phase", f2.phase}}},
      {"s1_reading", rc.s1_reading == S1Reading::kThermalLine ? "thermal"
                                                              : "positive"},
      {"tolerances", Json{{"grouping", rc.tol.grouping},
                          {"quadrature", rc.tol.quadrature},
                          {"crosscheck", rc.tol.crosscheck},
                          {"c0", rc.tol.c0}}},
      {"dynamics", std::move(dyn)},
      // The output directory is run-local plumbing and deliberately not
      // echoed, so artifacts from identical configurations are byte-equal
      // regardless of where they were written.
      {"sweep", Json{{"n_min", rc.sweep.n_min},
                     {"n_max", rc.sweep.n_max},
                     {"instances", rc.sweep.instances},
                     {"b_min", rc.sweep.b_min},
                     {"b_max", rc.sweep.b_max},
                     {"seed", rc.sweep.seed}}}};
}

}  // namespace qreson
