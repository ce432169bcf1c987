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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qreson/json_io.hpp"

namespace qreson::svg {

// All charts share a fixed 900x560 viewport and carry no timestamps, so
// repeated runs emit byte-identical files.
inline constexpr double kWidth = 900.0;
inline constexpr double kHeight = 560.0;
inline constexpr double kMarginLeft = 90.0;
inline constexpr double kMarginRight = 30.0;
inline constexpr double kMarginTop = 40.0;
inline constexpr double kMarginBottom = 70.0;

inline std::string num(double v) { return format_number(v, "%.6g"); }

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi > lo ? hi - lo : 1.0; }
};

inline double map_x(double v, const Range& r) {
  return kMarginLeft + (v - r.lo) / r.span() * (kWidth - kMarginLeft - kMarginRight);
}
inline double map_y(double v, const Range& r) {
  return kHeight - kMarginBottom -
         (v - r.lo) / r.span() * (kHeight - kMarginTop - kMarginBottom);
}

inline const char* palette(size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  return colors[i % 8];
}

inline void open_chart(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth)
      << " " << num(kHeight) << "\" font-family=\"monospace\" font-size=\"13\">\n"
      << "<rect width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"16\">"
      << title << "</text>\n";
}

inline void axes(std::ostringstream& out, const Range& rx, const Range& ry,
                 const std::string& xlabel, const std::string& ylabel) {
  const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
  out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
      << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = rx.lo + rx.span() * i / 5.0;
    const double fy = ry.lo + ry.span() * i / 5.0;
    const double px = map_x(fx, rx);
    const double py = map_y(fy, ry);
    out << "<line x1=\"" << num(px) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(px) << "\" y=\"" << num(y0 + 20)
        << "\" text-anchor=\"middle\">" << num(fx) << "</text>\n"
        << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(py) << "\" x2=\""
        << num(x0) << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << num(fy) << "</text>\n";
  }
  out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 16)
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
      << "<text x=\"18\" y=\"" << num((y0 + y1) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << num((y0 + y1) / 2) << ")\">" << ylabel << "</text>\n";
}

}  // namespace detail

/// Bar chart of per-group decay rates, bars ordered by |e| ascending.
inline void emit_rates_chart(const std::string& path,
                             std::vector<std::pair<double, double>> bars,
                             const std::string& title = "decay rates") {
  if (bars.empty()) throw InvalidInputError("rates chart: empty series");
  std::stable_sort(bars.begin(), bars.end(),
                   [](const auto& a, const auto& b) {
                     return std::abs(a.first) < std::abs(b.first);
                   });
  detail::Range ry;
  for (const auto& [e, gamma] : bars) ry.expand(gamma);

  std::ostringstream out;
  detail::open_chart(out, title);
  detail::Range rx{-0.5, static_cast<double>(bars.size()) - 0.5};
  detail::axes(out, rx, ry, "group (|e| ascending)", "gamma_e");
  const double slot = (kWidth - kMarginLeft - kMarginRight) /
                      static_cast<double>(bars.size());
  for (size_t i = 0; i < bars.size(); ++i) {
    const double x = kMarginLeft + slot * (static_cast<double>(i) + 0.15);
    const double y = detail::map_y(bars[i].second, ry);
    const double y_base = detail::map_y(0.0, ry);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(std::min(y, y_base))
        << "\" width=\"" << num(slot * 0.7) << "\" height=\""
        << num(std::abs(y_base - y)) << "\" fill=\"" << detail::palette(0)
        << "\"/>\n"
        << "<text x=\"" << num(x + slot * 0.35) << "\" y=\""
        << num(kHeight - kMarginBottom + 34)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << num(bars[i].first)
        << "</text>\n";
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

/// Line chart of one or more series over a shared x grid.
inline void emit_line_chart(const std::string& path,
                            const std::vector<Series>& series,
                            const std::string& title,
                            const std::string& xlabel,
                            const std::string& ylabel) {
  if (series.empty()) throw InvalidInputError("line chart: empty series");
  detail::Range rx{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  detail::Range ry{std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw InvalidInputError("line chart: malformed series");
    }
    for (double v : s.x) rx.expand(v);
    for (double v : s.y) ry.expand(v);
  }
  std::ostringstream out;
  detail::open_chart(out, title);
  detail::axes(out, rx, ry, xlabel, ylabel);
  for (size_t k = 0; k < series.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << detail::palette(k)
        << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < series[k].x.size(); ++i) {
      out << num(detail::map_x(series[k].x[i], rx)) << ","
          << num(detail::map_y(series[k].y[i], ry)) << " ";
    }
    out << "\"/>\n"
        << "<text x=\"" << num(kWidth - kMarginRight - 8) << "\" y=\""
        << num(kMarginTop + 16.0 * (static_cast<double>(k) + 1.0))
        << "\" text-anchor=\"end\" fill=\"" << detail::palette(k) << "\">"
        << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

/// Log-log scaling chart: series in (N, rate) form plus annotated slopes.
inline void emit_scaling_chart(const std::string& path,
                               const std::vector<Series>& series,
                               const std::vector<double>& slopes) {
  if (series.empty()) throw InvalidInputError("scaling chart: empty series");
  std::vector<Series> logged;
  for (const Series& s : series) {
    Series ls;
    ls.label = s.label;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (s.y[i] > 0.0) {
        ls.x.push_back(std::log10(s.x[i]));
        ls.y.push_back(std::log10(s.y[i]));
      }
    }
    if (ls.x.empty()) throw InvalidInputError("scaling chart: no positive data");
    logged.push_back(std::move(ls));
  }
  for (size_t k = 0; k < slopes.size() && k < logged.size(); ++k) {
    logged[static_cast<size_t>(k)].label +=
        " (slope " + num(slopes[k]) + ")";
  }
  emit_line_chart(path, logged, "scaling of max decay rates", "log10 N",
                  "log10 gamma");
}

}  // namespace qreson::svg
