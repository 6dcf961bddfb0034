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

#ifndef ENROUTE_SVG_HPP_
#define ENROUTE_SVG_HPP_

#include <string>
#include <vector>

namespace enroute {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal deterministic line chart (training curves).
std::string svg_line_chart(const std::string& title,
                           const std::vector<SvgSeries>& series,
                           const std::string& x_label,
                           const std::string& y_label);

// Bar chart (per-bucket mean gaps).
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::string>& labels,
                          const std::vector<double>& values,
                          const std::string& y_label);

}  // namespace enroute

#endif  // ENROUTE_SVG_HPP_
