// Copyright 2026 The enroute Authors
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

#include "enroute/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace enroute {
namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kMargin = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void chart_frame(std::ostringstream& os, const std::string& title,
                 const std::string& x_label, const std::string& y_label) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 8
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\">" << x_label << "</text>\n";
  os << "<text x=\"14\" y=\"" << kHeight / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
     << " transform=\"rotate(-90 14 " << kHeight / 2 << ")\">" << y_label
     << "</text>\n";
  os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
     << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin
     << "\" fill=\"none\" stroke=\"#333\"/>\n";
}

}  // namespace

std::string svg_line_chart(const std::string& title,
                           const std::vector<SvgSeries>& series,
                           const std::string& x_label,
                           const std::string& y_label) {
  double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        min_x = max_x = s.x[i];
        min_y = max_y = s.y[i];
        first = false;
      }
      min_x = std::min(min_x, s.x[i]);
      max_x = std::max(max_x, s.x[i]);
      min_y = std::min(min_y, s.y[i]);
      max_y = std::max(max_y, s.y[i]);
    }
  if (max_x == min_x) max_x = min_x + 1;
  if (max_y == min_y) max_y = min_y + 1;

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto px = [&](double x) { return kMargin + (x - min_x) / (max_x - min_x) * plot_w; };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - min_y) / (max_y - min_y) * plot_h;
  };

  std::ostringstream os;
  chart_frame(os, title, x_label, y_label);
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
     << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(min_x)
     << "</text>\n";
  os << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << fmt(max_x) << "</text>\n";
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << fmt(min_y) << "</text>\n";
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 10
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << fmt(max_y) << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    os << "<polyline fill=\"none\" stroke=\""
       << kPalette[color % 6] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    os << "\"/>\n";
    os << "<text x=\"" << kWidth - kMargin - 4 << "\" y=\""
       << kMargin + 16 + 14 * color << "\" text-anchor=\"end\" "
       << "font-family=\"sans-serif\" font-size=\"11\" fill=\""
       << kPalette[color % 6] << "\">" << s.label << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::string>& labels,
                          const std::vector<double>& values,
                          const std::string& y_label) {
  double max_y = 1e-12;
  for (double v : values) max_y = std::max(max_y, v);

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const std::size_t count = std::max<std::size_t>(values.size(), 1);
  const double slot = plot_w / count;

  std::ostringstream os;
  chart_frame(os, title, "", y_label);
  os << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 10
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << fmt(max_y) << "</text>\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double h = values[i] / max_y * plot_h;
    const double x = kMargin + slot * i + slot * 0.15;
    const double y = kHeight - kMargin - h;
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
       << fmt(slot * 0.7) << "\" height=\"" << fmt(h)
       << "\" fill=\"#1f77b4\"/>\n";
    os << "<text x=\"" << fmt(x + slot * 0.35) << "\" y=\""
       << kHeight - kMargin + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"10\">" << labels[i] << "</text>\n";
    os << "<text x=\"" << fmt(x + slot * 0.35) << "\" y=\"" << fmt(y - 4)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"10\">" << fmt(values[i]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace enroute
