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

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "qreson/level_shift.hpp"
#include "qreson/oracle.hpp"
#include "qreson/spectral_table.hpp"
#include "qreson/sweep.hpp"

namespace qreson {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v, const char* spec = "%.17g") {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, v);
  return buffer;
}

inline Json to_json(const Complex& z) {
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

inline std::string member_string(const std::pair<SpinConfig, SpinConfig>& m) {
  return m.first.to_string() + m.second.to_string();
}

inline Json to_json(const SpectralTable& table) {
  Json groups = Json::object();
  for (const EnergyGroup& g : table.groups) {
    Json members = Json::array();
    for (const auto& m : g.members) members.push_back(member_string(m));
    groups[format_number(g.e_value)] = Json{{"members", std::move(members)},
                                            {"n0", g.n0},
                                            {"mu", g.mu},
                                            {"e0", g.e0},
                                            {"hamming", g.hamming}};
  }
  return Json{{"n", table.n},
              {"tol", table.tol},
              {"gap", table.gap},
              {"generic", table.generic},
              {"a1_margin", table.a1_margin},
              {"warnings", table.warnings},
              {"groups", std::move(groups)}};
}

inline Json to_json(const RateCoefficients& rc) {
  return Json{{"x1", rc.x1}, {"y1", rc.y1},   {"x2", rc.x2},
              {"y2", rc.y2}, {"y12", rc.y12}, {"y0", rc.y0}};
}

inline Json to_json(const RateReport& report) {
  Json groups = Json::array();
  for (const GroupRates& gr : report.groups) {
    Json deltas = Json::array();
    for (const Complex& d : gr.deltas) deltas.push_back(to_json(d));
    groups.push_back(Json{{"e", gr.e},
                          {"n0", gr.n0},
                          {"mu", gr.mu},
                          {"e0", gr.e0},
                          {"hamming", gr.hamming},
                          {"deltas", std::move(deltas)},
                          {"gamma_e", gr.gamma},
                          {"oscillatory", gr.oscillatory},
                          {"has_real_nonzero_branch", gr.has_real_nonzero_branch},
                          {"decomposition", to_json(gr.rates)}});
  }
  return Json{{"interacting", report.interacting},
              {"y0", report.y0},
              {"gamma0", report.gamma0},
              {"printed_radical_max_dev", report.printed_radical_max_dev},
              {"groups", std::move(groups)}};
}

inline Json to_json(const CrosscheckReport& cc) {
  return Json{{"group_e", cc.group_e},
              {"max_eig_dev", cc.max_eig_dev},
              {"max_entry_dev", cc.max_entry_dev},
              {"max_subspace_angle", cc.max_subspace_angle},
              {"pass", cc.pass}};
}

inline Json to_json(const LinearFit& fit) {
  return Json{{"slope", fit.slope}, {"intercept", fit.intercept},
              {"r2", fit.r2}};
}

inline Json to_json(const ScalingReport& report) {
  Json points = Json::array();
  for (const SweepPoint& p : report.points) {
    points.push_back(Json{{"n", p.n},
                          {"max_gamma_dephasing", p.max_gamma_dephasing},
                          {"expected_dephasing", p.expected_dephasing},
                          {"max_gamma_exchange", p.max_gamma_exchange},
                          {"exchange_bound", p.exchange_bound},
                          {"e0_rate", p.e0_rate}});
  }
  Json hamming = Json::array();
  for (const HammingPoint& hp : report.hamming) {
    hamming.push_back(Json{{"distance", hp.distance}, {"mean_y2", hp.mean_y2}});
  }
  return Json{{"seed", report.seed},
              {"points", std::move(points)},
              {"fits",
               Json{{"dephasing_loglog", to_json(report.dephasing_loglog)},
                    {"exchange_loglog", to_json(report.exchange_loglog)},
                    {"e0_loglog", to_json(report.e0_loglog)},
                    {"hamming", to_json(report.hamming_fit)}}},
              {"hamming", std::move(hamming)}};
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline void write_json_file(const std::string& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace qreson
