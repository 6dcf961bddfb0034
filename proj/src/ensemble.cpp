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

#include "enroute/ensemble.hpp"

#include <sstream>

namespace enroute {
namespace {

std::string get_or(const std::map<std::string, std::string>& meta,
                   const std::string& key, const std::string& fallback) {
  const auto it = meta.find(key);
  return it == meta.end() ? fallback : it->second;
}

}  // namespace

PolicyConfig PolicyConfig::preset(const std::string& name) {
  PolicyConfig config;
  if (name == "default") {
    return config;
  }
  if (name == "tiny") {
    config.global.embed_dim = 32;
    config.global.layers = 2;
    config.global.heads = 4;
    config.global.ff_dim = 128;
    config.local.neighbor_count = 20;
    config.local.hidden_dim = 128;
    return config;
  }
  if (name == "micro") {
    config.global.embed_dim = 16;
    config.global.layers = 1;
    config.global.heads = 2;
    config.global.ff_dim = 32;
    config.local.neighbor_count = 6;
    config.local.hidden_dim = 24;
    return config;
  }
  throw Error("unknown preset: " + name);
}

std::map<std::string, std::string> PolicyConfig::to_meta(
    ProblemKind kind) const {
  std::map<std::string, std::string> meta;
  meta["policy.kind"] = kind == ProblemKind::kCvrp ? "cvrp" : "tsp";
  meta["policy.embed_dim"] = std::to_string(global.embed_dim);
  meta["policy.layers"] = std::to_string(global.layers);
  meta["policy.heads"] = std::to_string(global.heads);
  meta["policy.ff_dim"] = std::to_string(global.ff_dim);
  meta["policy.glimpse"] = global.use_glimpse ? "1" : "0";
  meta["policy.neighbors"] = std::to_string(local.neighbor_count);
  meta["policy.remote_penalty"] = std::to_string(local.remote_penalty);
  meta["policy.local_hidden"] = std::to_string(local.hidden_dim);
  meta["policy.clip"] = std::to_string(clip);
  meta["policy.use_local"] = use_local ? "1" : "0";
  meta["policy.aggregation"] =
      aggregation == Aggregation::kMoeGate ? "moe" : "sum";
  if (!extra_local_neighbor_counts.empty()) {
    std::string list;
    for (int k : extra_local_neighbor_counts) {
      if (!list.empty()) list += ",";
      list += std::to_string(k);
    }
    meta["policy.extra_neighbors"] = list;
  }
  meta["policy.init"] = "uniform(-1/sqrt(fan_in), 1/sqrt(fan_in))";
  return meta;
}

std::pair<PolicyConfig, ProblemKind> PolicyConfig::from_meta(
    const std::map<std::string, std::string>& meta) {
  PolicyConfig config;
  config.global.embed_dim = std::stoi(get_or(meta, "policy.embed_dim", "128"));
  config.global.layers = std::stoi(get_or(meta, "policy.layers", "6"));
  config.global.heads = std::stoi(get_or(meta, "policy.heads", "8"));
  config.global.ff_dim = std::stoi(get_or(meta, "policy.ff_dim", "512"));
  config.global.use_glimpse = get_or(meta, "policy.glimpse", "1") == "1";
  config.local.neighbor_count =
      std::stoi(get_or(meta, "policy.neighbors", "100"));
  config.local.remote_penalty =
      std::stod(get_or(meta, "policy.remote_penalty", "-1"));
  config.local.hidden_dim =
      std::stoi(get_or(meta, "policy.local_hidden", "512"));
  config.clip = std::stod(get_or(meta, "policy.clip", "50"));
  config.use_local = get_or(meta, "policy.use_local", "1") == "1";
  config.aggregation = get_or(meta, "policy.aggregation", "sum") == "moe"
                           ? Aggregation::kMoeGate
                           : Aggregation::kSumClip;
  const std::string extras = get_or(meta, "policy.extra_neighbors", "");
  if (!extras.empty()) {
    std::istringstream list(extras);
    std::string item;
    while (std::getline(list, item, ','))
      config.extra_local_neighbor_counts.push_back(std::stoi(item));
  }
  const ProblemKind kind = get_or(meta, "policy.kind", "tsp") == "cvrp"
                               ? ProblemKind::kCvrp
                               : ProblemKind::kTsp;
  return {config, kind};
}

}  // namespace enroute
