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

#ifndef ENROUTE_VRPLIB_HPP_
#define ENROUTE_VRPLIB_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enroute/env.hpp"
#include "enroute/instance.hpp"

namespace enroute {

struct VrplibMeta {
  std::string edge_weight_type = "EUC_2D";
  int declared_dimension = 0;
  std::string comment;
  std::optional<double> bks;
  std::vector<std::string> warnings;  // unknown keywords etc.
  // Customer labels as they appeared in the source file (1-based customer
  // ordinal by default). Used when emitting solutions for re-indexed files.
  std::vector<int> original_customer_numbers;
};

struct ParsedInstance {
  Instance instance;
  VrplibMeta meta;
};

// Keyword-format reader (NAME / TYPE / DIMENSION / EDGE_WEIGHT_TYPE /
// CAPACITY / NODE_COORD_SECTION / DEMAND_SECTION / DEPOT_SECTION / EOF).
// Only EUC_2D edge weights are supported. A depot listed anywhere in the
// coordinate section is re-indexed to position 0.
ParsedInstance parse_vrplib(const std::string& text);
ParsedInstance load_vrplib(const std::string& path);

std::string write_vrplib(const Instance& inst, const VrplibMeta& meta = {});

// Route-per-line solution text ("Route #k: ..." then "Cost ...").
// Refuses infeasible solutions with the violation report in the message.
std::string write_solution(const Instance& inst, const Solution& sol,
                           const VrplibMeta& meta = {});

struct NormalizationRecord {
  double dx = 0.0;
  double dy = 0.0;
  double scale = 1.0;  // single uniform scale; aspect ratio preserved

  double to_original_length(double normalized_length) const {
    return normalized_length * scale;
  }
};

// Min-max maps coordinates into the unit square; the larger spread axis spans
// exactly [0, 1]. Throws on fully coincident nodes.
std::pair<Instance, NormalizationRecord> normalize_coords(const Instance& inst);

// "name,bks" CSV; lines starting with '#' and a non-numeric header row are
// skipped.
std::map<std::string, double> load_bks_csv(const std::string& path);

}  // namespace enroute

#endif  // ENROUTE_VRPLIB_HPP_
