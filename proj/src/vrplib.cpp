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

#include "enroute/vrplib.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "enroute/error.hpp"

namespace enroute {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

// Shortest exact decimal representation; reparses to the same double.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf),
                                   static_cast<long long>(v));
    (void)ec;
    return std::string(buf, ptr);
  }
  return format_double(v);
}

struct Line {
  std::string text;
  int number;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream is(text);
  std::string raw;
  int number = 0;
  while (std::getline(is, raw)) lines.push_back({trim(raw), ++number});
  return lines;
}

bool parse_keyword_line(const std::string& line, std::string* key,
                        std::string* value) {
  const auto colon = line.find(':');
  std::istringstream probe(line);
  std::string first;
  probe >> first;
  if (colon != std::string::npos) {
    *key = upper(trim(line.substr(0, colon)));
    *value = trim(line.substr(colon + 1));
  } else {
    *key = upper(trim(first));
    std::string rest;
    std::getline(probe, rest);
    *value = trim(rest);
  }
  // Keyword lines are single uppercase tokens (possibly with underscores).
  return !key->empty() &&
         key->find_first_not_of(
             "ABCDEFGHIJKLMNOPQRSTUVWXYZ_0123456789") == std::string::npos &&
         !std::isdigit(static_cast<unsigned char>((*key)[0]));
}

}  // namespace

ParsedInstance parse_vrplib(const std::string& text) {
  const auto lines = split_lines(text);

  ParsedInstance out;
  Instance& inst = out.instance;
  VrplibMeta& meta = out.meta;

  std::string type;
  int dimension = -1;
  double capacity = -1.0;
  std::vector<std::pair<double, double>> coords;
  std::vector<double> demands;
  std::vector<int> node_ids;
  int depot_id = -1;
  bool saw_coord_section = false;
  bool saw_demand_section = false;

  std::size_t i = 0;
  while (i < lines.size()) {
    const auto& [line, lineno] = lines[i];
    if (line.empty()) {
      ++i;
      continue;
    }
    std::string key, value;
    if (!parse_keyword_line(line, &key, &value)) {
      throw ParseError("expected a keyword, got '" + line + "'", lineno);
    }

    if (key == "NAME") {
      inst.name = value;
      ++i;
    } else if (key == "COMMENT") {
      if (!meta.comment.empty()) meta.comment += "\n";
      meta.comment += value;
      ++i;
    } else if (key == "TYPE") {
      type = upper(value);
      ++i;
    } else if (key == "DIMENSION") {
      dimension = std::stoi(value);
      ++i;
    } else if (key == "EDGE_WEIGHT_TYPE") {
      meta.edge_weight_type = upper(value);
      if (meta.edge_weight_type != "EUC_2D")
        throw ParseError("unsupported edge weight type '" + value + "'",
                         lineno);
      ++i;
    } else if (key == "CAPACITY") {
      capacity = std::stod(value);
      ++i;
    } else if (key == "NODE_COORD_SECTION") {
      saw_coord_section = true;
      ++i;
      while (i < lines.size()) {
        const auto& [body, body_no] = lines[i];
        if (body.empty()) {
          ++i;
          continue;
        }
        std::istringstream row(body);
        int id;
        double x, y;
        if (!(row >> id >> x >> y)) break;  // next section
        node_ids.push_back(id);
        coords.emplace_back(x, y);
        ++i;
      }
    } else if (key == "DEMAND_SECTION") {
      saw_demand_section = true;
      if (dimension < 0)
        throw ParseError("DEMAND_SECTION before DIMENSION", lineno);
      demands.assign(dimension, -1.0);
      ++i;
      while (i < lines.size()) {
        const auto& [body, body_no] = lines[i];
        if (body.empty()) {
          ++i;
          continue;
        }
        std::istringstream row(body);
        int id;
        double d;
        if (!(row >> id >> d)) break;
        if (id < 1 || id > dimension)
          throw ParseError("demand id out of range", body_no);
        demands[id - 1] = d;
        ++i;
      }
    } else if (key == "DEPOT_SECTION") {
      ++i;
      while (i < lines.size()) {
        const auto& [body, body_no] = lines[i];
        if (body.empty()) {
          ++i;
          continue;
        }
        std::istringstream row(body);
        int id;
        if (!(row >> id)) break;
        ++i;
        if (id == -1) break;
        if (depot_id != -1)
          throw ParseError("multiple depots are not supported", body_no);
        depot_id = id;
      }
    } else if (key == "EOF") {
      break;
    } else {
      meta.warnings.push_back("skipped unknown keyword '" + key + "' at line " +
                              std::to_string(lineno));
      ++i;
    }
  }

  if (type.empty()) throw ParseError("missing TYPE");
  if (type == "TSP") {
    inst.kind = ProblemKind::kTsp;
  } else if (type == "CVRP" || type == "VRP") {
    inst.kind = ProblemKind::kCvrp;
  } else {
    throw ParseError("unsupported TYPE '" + type + "'");
  }
  if (dimension < 1) throw ParseError("missing or invalid DIMENSION");
  if (!saw_coord_section) throw ParseError("missing NODE_COORD_SECTION");
  if (static_cast<int>(coords.size()) != dimension) {
    const int last_line = lines.empty() ? 0 : lines.back().number;
    throw ParseError("DIMENSION is " + std::to_string(dimension) + " but " +
                         std::to_string(coords.size()) +
                         " coordinate rows were found",
                     last_line);
  }
  meta.declared_dimension = dimension;

  if (inst.kind == ProblemKind::kCvrp) {
    if (!saw_demand_section) throw ParseError("missing DEMAND_SECTION");
    if (capacity <= 0) throw ParseError("missing or invalid CAPACITY");
    for (int k = 0; k < dimension; ++k)
      if (demands[k] < 0)
        throw ParseError("missing demand for node " + std::to_string(k + 1));
    if (depot_id == -1) depot_id = 1;
  }

  // Map file rows to dense 0-based indices, depot first for CVRP.
  std::vector<int> order(dimension);
  for (int k = 0; k < dimension; ++k) order[k] = k;
  int depot_pos = 0;
  if (inst.kind == ProblemKind::kCvrp) {
    depot_pos = -1;
    for (int k = 0; k < dimension; ++k)
      if (node_ids[k] == depot_id) depot_pos = k;
    if (depot_pos == -1) throw ParseError("depot id not present in coordinates");
    if (depot_pos != 0) {
      order.clear();
      order.push_back(depot_pos);
      for (int k = 0; k < dimension; ++k)
        if (k != depot_pos) order.push_back(k);
    }
  }

  inst.coords.resize(dimension, 2);
  if (inst.kind == ProblemKind::kCvrp) inst.demands.resize(dimension);
  meta.original_customer_numbers.clear();
  for (int row = 0; row < dimension; ++row) {
    const int src = order[row];
    inst.coords(row, 0) = coords[src].first;
    inst.coords(row, 1) = coords[src].second;
    if (inst.kind == ProblemKind::kCvrp) {
      inst.demands(row) = demands[src];
      // 1-based rank of this customer among the file's non-depot rows.
      if (row > 0)
        meta.original_customer_numbers.push_back(src < depot_pos ? src + 1
                                                                 : src);
    }
  }
  if (inst.kind == ProblemKind::kCvrp) {
    inst.capacity = capacity;
    if (inst.demands(0) != 0)
      throw ParseError("depot demand must be zero");
  }

  inst.distance_mode = DistanceMode::kRoundedInt;  // EUC_2D convention
  inst.validate();
  return out;
}

ParsedInstance load_vrplib(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_vrplib(buffer.str());
}

std::string write_vrplib(const Instance& inst, const VrplibMeta& meta) {
  inst.validate();
  std::ostringstream os;
  os << "NAME : " << inst.name << "\n";
  if (!meta.comment.empty()) os << "COMMENT : " << meta.comment << "\n";
  os << "TYPE : " << (inst.is_cvrp() ? "CVRP" : "TSP") << "\n";
  os << "DIMENSION : " << inst.node_count() << "\n";
  os << "EDGE_WEIGHT_TYPE : EUC_2D\n";
  if (inst.is_cvrp())
    os << "CAPACITY : " << format_number(inst.capacity) << "\n";
  os << "NODE_COORD_SECTION\n";
  for (int i = 0; i < inst.node_count(); ++i)
    os << (i + 1) << " " << format_double(inst.coords(i, 0)) << " "
       << format_double(inst.coords(i, 1)) << "\n";
  if (inst.is_cvrp()) {
    os << "DEMAND_SECTION\n";
    for (int i = 0; i < inst.node_count(); ++i)
      os << (i + 1) << " " << format_number(inst.demands(i)) << "\n";
    os << "DEPOT_SECTION\n1\n-1\n";
  }
  os << "EOF\n";
  return os.str();
}

std::string write_solution(const Instance& inst, const Solution& sol,
                           const VrplibMeta& meta) {
  if (auto report = feasibility_check(inst, sol.tour))
    throw Error("refusing to write infeasible solution: " + report->str());

  const bool remap =
      inst.is_cvrp() && static_cast<int>(meta.original_customer_numbers.size()) ==
                            inst.customer_count();
  const auto routes = split_routes(inst, sol.tour);
  std::ostringstream os;
  int k = 0;
  for (const auto& route : routes) {
    os << "Route #" << ++k << ":";
    for (int node : route) {
      // CVRP: customers numbered 1..N with the depot implicit. TSP: file ids.
      const int label = inst.is_cvrp()
                            ? (remap ? meta.original_customer_numbers[node - 1]
                                     : node)
                            : node + 1;
      os << " " << label;
    }
    os << "\n";
  }
  os << "Cost " << format_number(sol.objective) << "\n";
  return os.str();
}

std::pair<Instance, NormalizationRecord> normalize_coords(
    const Instance& inst) {
  const double min_x = inst.coords.col(0).minCoeff();
  const double max_x = inst.coords.col(0).maxCoeff();
  const double min_y = inst.coords.col(1).minCoeff();
  const double max_y = inst.coords.col(1).maxCoeff();
  const double spread = std::max(max_x - min_x, max_y - min_y);
  if (spread <= 0.0)
    throw Error("normalize_coords: all nodes coincide");

  NormalizationRecord record{min_x, min_y, spread};
  Instance normalized = inst;
  normalized.coords.col(0) =
      (inst.coords.col(0).array() - min_x) / spread;
  normalized.coords.col(1) =
      (inst.coords.col(1).array() - min_y) / spread;
  return {std::move(normalized), record};
}

std::map<std::string, double> load_bks_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open BKS file: " + path);
  std::map<std::string, double> bks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("BKS row needs 'name,value'", lineno);
    const std::string name = trim(line.substr(0, comma));
    const std::string value = trim(line.substr(comma + 1));
    try {
      bks[name] = std::stod(value);
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header row
      throw ParseError("BKS value is not numeric: '" + value + "'", lineno);
    }
  }
  return bks;
}

}  // namespace enroute
