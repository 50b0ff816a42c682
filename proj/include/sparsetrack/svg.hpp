// Copyright 2026 the sparsetrack authors.
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

#ifndef SPARSETRACK_SVG_HPP
#define SPARSETRACK_SVG_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsetrack {

// Minimal line-chart emitter: one panel, one polyline per named series,
// auto-scaled axes, optional log10 y-axis.
inline std::string svg_line_chart(
    const std::string& title,
    const std::map<std::string, std::vector<double>>& series,
    bool log_y = false) {
  const int width = 640, height = 420;
  const int ml = 64, mr = 16, mt = 36, mb = 44;
  const double pw = width - ml - mr, ph = height - mt - mb;
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};

  double ymin = 1e300, ymax = -1e300;
  std::size_t nmax = 0;
  for (const auto& [name, ys] : series) {
    nmax = std::max(nmax, ys.size());
    for (double v : ys) {
      if (log_y && v <= 0.0) continue;
      const double y = log_y ? std::log10(v) : v;
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (nmax == 0 || ymin > ymax) {
    ymin = 0.0;
    ymax = 1.0;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xs = nmax > 1 ? pw / (nmax - 1) : 0.0;
  auto ypix = [&](double v) {
    const double y = log_y ? std::log10(std::max(v, 1e-300)) : v;
    return mt + ph * (1.0 - (y - ymin) / (ymax - ymin));
  };

  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
      << "' height='" << height << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << width / 2 << "' y='20' text-anchor='middle' "
      << "font-family='sans-serif' font-size='14'>" << title << "</text>\n";

  // axes and y tick labels
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << mt + ph << "' stroke='black'/>\n<line x1='" << ml << "' y1='"
      << mt + ph << "' x2='" << ml + pw << "' y2='" << mt + ph
      << "' stroke='black'/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    const double py = mt + ph * (1.0 - double(k) / 4.0);
    std::ostringstream lbl;
    lbl.precision(3);
    if (log_y)
      lbl << "1e" << yv;
    else
      lbl << yv;
    out << "<text x='" << ml - 6 << "' y='" << py + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='10'>"
        << lbl.str() << "</text>\n";
  }
  out << "<text x='" << ml + pw / 2 << "' y='" << height - 8
      << "' text-anchor='middle' font-family='sans-serif' font-size='11'>t"
      << "</text>\n";

  int ci = 0;
  int legend_y = mt + 6;
  for (const auto& [name, ys] : series) {
    const char* color = palette[ci++ % 6];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < ys.size(); ++i)
      out << ml + xs * i << "," << ypix(ys[i]) << " ";
    out << "'/>\n";
    out << "<rect x='" << ml + pw - 130 << "' y='" << legend_y - 8
        << "' width='10' height='10' fill='" << color << "'/>"
        << "<text x='" << ml + pw - 116 << "' y='" << legend_y + 1
        << "' font-family='sans-serif' font-size='11'>" << name << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sparsetrack

#endif  // SPARSETRACK_SVG_HPP
