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

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "enroute/checkpoint.hpp"
#include "enroute/rollout.hpp"
#include "enroute/stats.hpp"
#include "enroute/svg.hpp"
#include "enroute/trainer.hpp"
#include "enroute/vrplib.hpp"

namespace fs = std::filesystem;
using namespace enroute;

namespace {

// ---------------------------------------------------------------- helpers

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

template <class Scalar>
EnsemblePolicy<Scalar> policy_from_checkpoint(const CheckpointData& data) {
  auto [config, kind] = PolicyConfig::from_meta(data.meta);
  EnsemblePolicy<Scalar> policy(kind, config, 0);
  assign_params(policy.params(), data);
  return policy;
}

struct GenerateOptions {
  std::string kind = "cvrp";
  int count = 10;
  int n = 100;
  int n_min = 0, n_max = 0;  // used when both > 0
  std::uint64_t seed = 1;
  std::string out_dir = "instances";
  std::string prefix = "rnd";
  // Unit-square draws are blown up to an integer grid before writing, the
  // usual shape of EUC_2D benchmark files (rounded integer distances would
  // collapse at unit scale). 0 keeps raw coordinates.
  double coord_scale = 1000.0;
};

int run_generate(const GenerateOptions& opts) {
  const ProblemKind kind =
      opts.kind == "tsp" ? ProblemKind::kTsp : ProblemKind::kCvrp;
  GenConfig config;
  if (opts.n_min > 0 && opts.n_max > 0)
    config.scale_sampler = UniformScaleRange{opts.n_min, opts.n_max};
  else
    config.scale_sampler = FixedScale{opts.n};
  config.seed = opts.seed;
  Rng rng(opts.seed);

  fs::create_directories(opts.out_dir);
  for (int i = 0; i < opts.count; ++i) {
    Instance inst = gen_instance(config, kind, rng);
    if (opts.coord_scale > 0) {
      inst.coords *= opts.coord_scale;
      inst.coords = inst.coords.array().round();
    }
    inst.name = opts.prefix + std::to_string(i) + "_n" +
                std::to_string(inst.customer_count());
    const std::string ext = kind == ProblemKind::kTsp ? ".tsp" : ".vrp";
    const std::string path =
        (fs::path(opts.out_dir) / (inst.name + ext)).string();
    write_text(path, write_vrplib(inst));
    std::cout << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- train

struct TrainCliOptions {
  TrainConfig config;
  std::string kind = "tsp";
  std::string scale;          // "100" or "100:500"
  std::string baseline = "rs";
  std::string mode = "small";
  std::string precision = "f32";
  std::string init_from;
  std::vector<int> val_scales;
  std::vector<double> val_capacities;
  int val_instances = 32;
  std::vector<int> extra_local_k;
};

template <class Scalar>
int run_train_typed(TrainCliOptions& cli) {
  TrainConfig& config = cli.config;
  config.kind = cli.kind == "cvrp" ? ProblemKind::kCvrp : ProblemKind::kTsp;
  config.baseline = cli.baseline == "shared" ? BaselineKind::kShared
                                             : BaselineKind::kRiskSeeking;

  const TrainMode mode = cli.mode == "varying" ? TrainMode::kVaryingScale
                                               : TrainMode::kSmallScale;
  if (!cli.scale.empty()) {
    const auto colon = cli.scale.find(':');
    if (colon == std::string::npos) {
      config.scale = FixedScale{std::stoi(cli.scale)};
    } else {
      config.scale = UniformScaleRange{std::stoi(cli.scale.substr(0, colon)),
                                       std::stoi(cli.scale.substr(colon + 1))};
    }
  } else if (mode == TrainMode::kVaryingScale) {
    config.scale = UniformScaleRange{100, 500};
  }

  // Validation sets: default capacities follow the fixed-capacity convention
  // of the reference validation curves (50 at N=100, 100 at N=500).
  config.validation.clear();
  for (std::size_t i = 0; i < cli.val_scales.size(); ++i) {
    ValidationSetSpec spec;
    spec.scale = cli.val_scales[i];
    spec.capacity = i < cli.val_capacities.size()
                        ? cli.val_capacities[i]
                        : (spec.scale >= 500 ? 100.0 : 50.0);
    spec.instances = cli.val_instances;
    config.validation.push_back(spec);
  }

  PolicyConfig policy_config = PolicyConfig::preset(config.preset);
  policy_config.extra_local_neighbor_counts = cli.extra_local_k;
  EnsemblePolicy<Scalar> policy(config.kind, policy_config,
                                config.seed ^ 0x5eedf00dULL);
  bool has_prior = false;
  if (!cli.init_from.empty()) {
    const auto data = read_checkpoint(cli.init_from);
    assign_params(policy.params(), data);
    has_prior = true;
  }

  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult result = train(policy, config, mode, has_prior);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::cout << "steps: " << result.steps_run << "\n"
            << "validation before: " << result.first_validation_mean << "\n"
            << "validation after:  " << result.final_validation_mean << "\n"
            << "wall time [s]: " << seconds << "\n";
  if (!config.checkpoint_path.empty())
    std::cout << "checkpoint: " << config.checkpoint_path << "\n";
  return 0;
}

int run_train(TrainCliOptions& cli) {
  if (cli.precision == "f64") return run_train_typed<double>(cli);
  return run_train_typed<float>(cli);
}

// ---------------------------------------------------------------- solve

struct SolveCliOptions {
  std::string checkpoint;
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  int max_starts = 1000;
  std::string normalize = "auto";
  std::string mode = "greedy";
  std::uint64_t seed = 1;
};

template <class Scalar>
int run_solve_typed(const SolveCliOptions& cli, const CheckpointData& data) {
  auto policy = policy_from_checkpoint<Scalar>(data);
  SolveOptions opts;
  opts.max_starts = cli.max_starts;
  opts.mode = cli.mode == "sample" ? SelectMode::kSample : SelectMode::kGreedy;
  opts.normalize = cli.normalize == "always" ? NormalizePolicy::kAlways
                   : cli.normalize == "never" ? NormalizePolicy::kNever
                                              : NormalizePolicy::kAuto;
  Rng rng(cli.seed);
  fs::create_directories(cli.out_dir);

  for (const auto& input : cli.inputs) {
    const auto parsed = load_vrplib(input);
    const Instance& inst = parsed.instance;
    const auto result = solve_instance(policy, inst, opts, &rng);
    const std::string name = inst.name.empty() ? stem_of(input) : inst.name;
    const std::string sol_path =
        (fs::path(cli.out_dir) / (name + ".sol")).string();
    write_text(sol_path,
               write_solution(inst, result.solution, parsed.meta));
    std::cout << name << " cost " << result.solution.objective << " rollouts "
              << result.rollouts << " -> " << sol_path << "\n";
  }
  return 0;
}

int run_solve(const SolveCliOptions& cli) {
  const auto data = read_checkpoint(cli.checkpoint);
  if (data.scalar_width == 8) return run_solve_typed<double>(cli, data);
  return run_solve_typed<float>(cli, data);
}

// ---------------------------------------------------------------- bench

struct BenchCliOptions {
  std::string checkpoint;
  std::string dir;
  std::string bks;
  std::string records = "records.csv";
  std::string method = "enroute";
  int max_starts = 1000;
  std::string normalize = "auto";
};

void print_aggregate(const AggregateReport& report, bool cvrp_style) {
  std::cout << "bucket,count,mean_gap\n";
  for (const auto& bucket : report.buckets)
    std::cout << bucket.label << "," << bucket.count << ","
              << bucket.mean_gap << "\n";
  std::cout << "total," << report.total_count << "," << report.total_mean_gap
            << "\n";
  std::cout << (cvrp_style ? "# mean of per-instance gaps (benchmark convention)"
                           : "# mean of per-instance gaps")
            << "\n";
  std::cout << "# ratio of means: mean cost " << report.mean_cost
            << " vs mean ref " << report.mean_ref << " -> gap "
            << report.ratio_of_means_gap << "\n";
  for (const auto& notice : report.notices)
    std::cout << "# " << notice << "\n";
}

template <class Scalar>
int run_bench_typed(const BenchCliOptions& cli, const CheckpointData& data) {
  auto policy = policy_from_checkpoint<Scalar>(data);
  const auto bks = load_bks_csv(cli.bks);

  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(cli.dir)) {
    const std::string ext = entry.path().extension().string();
    if (ext == ".vrp" || ext == ".tsp") paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw Error("no .vrp/.tsp files in " + cli.dir);

  SolveOptions opts;
  opts.max_starts = cli.max_starts;
  opts.normalize = cli.normalize == "always" ? NormalizePolicy::kAlways
                   : cli.normalize == "never" ? NormalizePolicy::kNever
                                              : NormalizePolicy::kAuto;

  std::vector<BenchRecord> records;
  bool cvrp_seen = false;
  for (const auto& path : paths) {
    const auto parsed = load_vrplib(path);
    const Instance& inst = parsed.instance;
    const std::string name = inst.name.empty() ? stem_of(path) : inst.name;
    const auto ref = bks.find(name);
    if (ref == bks.end()) {
      std::cerr << "warning: no reference value for " << name
                << "; skipped\n";
      continue;
    }
    if (inst.kind != policy.kind()) {
      std::cerr << "warning: " << name
                << " is not the checkpoint's problem kind; skipped\n";
      continue;
    }
    cvrp_seen = cvrp_seen || inst.is_cvrp();

    const auto t0 = std::chrono::steady_clock::now();
    const auto result = solve_instance(policy, inst, opts);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    BenchRecord rec;
    rec.instance = name;
    rec.n = inst.customer_count();
    rec.method = cli.method;
    rec.cost = result.solution.objective;
    rec.ref = ref->second;
    rec.gap = gap(rec.cost, rec.ref);
    rec.time_s = seconds;
    records.push_back(rec);
    std::cout << name << " n=" << rec.n << " cost=" << rec.cost
              << " ref=" << rec.ref << " gap=" << rec.gap * 100 << "%"
              << " time=" << seconds << "s\n";
  }
  if (records.empty()) throw Error("no instance had a reference value");

  std::ofstream out(cli.records);
  if (!out) throw Error("cannot write " + cli.records);
  out << "instance,n,method,cost,ref,gap,time_s\n";
  for (const auto& rec : records)
    out << rec.instance << "," << rec.n << "," << rec.method << ","
        << rec.cost << "," << rec.ref << "," << rec.gap << "," << rec.time_s
        << "\n";

  print_aggregate(aggregate(records), cvrp_seen);
  return 0;
}

int run_bench(const BenchCliOptions& cli) {
  const auto data = read_checkpoint(cli.checkpoint);
  if (data.scalar_width == 8) return run_bench_typed<double>(cli, data);
  return run_bench_typed<float>(cli, data);
}

// ---------------------------------------------------------------- report

struct ReportCliOptions {
  std::string records;
  std::string curve;
  std::string out_dir = "report";
  std::vector<std::string> wilcoxon;  // two method tags
};

std::vector<BenchRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open records: " + path);
  std::vector<BenchRecord> records;
  std::string line;
  std::getline(in, line);  // header
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    BenchRecord rec;
    try {
      std::getline(row, rec.instance, ',');
      std::getline(row, field, ',');
      rec.n = std::stoi(field);
      std::getline(row, rec.method, ',');
      std::getline(row, field, ',');
      rec.cost = std::stod(field);
      std::getline(row, field, ',');
      rec.ref = std::stod(field);
      std::getline(row, field, ',');
      rec.gap = std::stod(field);
      if (std::getline(row, field, ',')) rec.time_s = std::stod(field);
    } catch (const std::exception&) {
      throw ParseError("malformed record row", lineno);
    }
    records.push_back(rec);
  }
  return records;
}

int run_report(const ReportCliOptions& cli) {
  const auto records = read_records_csv(cli.records);
  if (records.empty()) throw Error("records file is empty");
  fs::create_directories(cli.out_dir);

  std::vector<std::string> methods;
  for (const auto& rec : records)
    if (std::find(methods.begin(), methods.end(), rec.method) == methods.end())
      methods.push_back(rec.method);

  std::ofstream buckets_csv(fs::path(cli.out_dir) / "buckets.csv");
  buckets_csv << "method,bucket,count,mean_gap\n";
  for (const auto& method : methods) {
    std::vector<BenchRecord> subset;
    for (const auto& rec : records)
      if (rec.method == method) subset.push_back(rec);
    const auto report = aggregate(subset);

    std::cout << "== " << method << " ==\n";
    print_aggregate(report, true);

    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& bucket : report.buckets) {
      buckets_csv << method << "," << bucket.label << "," << bucket.count
                  << "," << bucket.mean_gap << "\n";
      labels.push_back(bucket.label);
      values.push_back(bucket.mean_gap);
    }
    buckets_csv << method << ",total," << report.total_count << ","
                << report.total_mean_gap << "\n";
    write_text((fs::path(cli.out_dir) / ("gaps_" + method + ".svg")).string(),
               svg_bar_chart("mean gap by scale: " + method, labels, values,
                             "mean gap"));
  }

  if (cli.wilcoxon.size() == 2) {
    std::map<std::string, double> gaps_a, gaps_b;
    for (const auto& rec : records) {
      if (rec.method == cli.wilcoxon[0]) gaps_a[rec.instance] = rec.gap;
      if (rec.method == cli.wilcoxon[1]) gaps_b[rec.instance] = rec.gap;
    }
    std::vector<double> a, b;
    for (const auto& [name, value] : gaps_a) {
      const auto it = gaps_b.find(name);
      if (it != gaps_b.end()) {
        a.push_back(value);
        b.push_back(it->second);
      }
    }
    if (a.size() < 6)
      std::cerr << "warning: only " << a.size()
                << " shared instances; p-value has little meaning\n";
    const auto result = wilcoxon_one_sided(a, b);
    std::cout << "one-sided signed-rank: H0 '" << cli.wilcoxon[0]
              << " has no larger gaps than " << cli.wilcoxon[1] << "'\n"
              << "pairs used " << result.pairs_used << ", W+ "
              << result.statistic << ", p = " << result.p_value
              << (result.exact ? " (exact)" : " (normal approx.)") << "\n";
    if (result.warning) std::cout << "warning: " << *result.warning << "\n";
  }

  if (!cli.curve.empty()) {
    std::ifstream in(cli.curve);
    if (!in) throw Error("cannot open curve: " + cli.curve);
    std::string line;
    std::getline(in, line);
    std::map<std::string, SvgSeries> series;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string step, set, cost;
      std::getline(row, step, ',');
      std::getline(row, set, ',');
      std::getline(row, cost, ',');
      auto& s = series[set];
      s.label = set;
      s.x.push_back(std::stod(step));
      s.y.push_back(std::stod(cost));
    }
    std::vector<SvgSeries> list;
    for (auto& [key, s] : series) list.push_back(s);
    write_text((fs::path(cli.out_dir) / "curve.svg").string(),
               svg_line_chart("validation cost", list, "step", "mean cost"));
  }
  std::cout << "report written to " << cli.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- selfcheck

bool report_check(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[ok]   " : "[FAIL] ") << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  return ok;
}

double param_grad_check(
    nn::ParamStore<double>& store,
    const std::function<double(bool)>& forward_backward) {
  const Eigen::VectorXd point = store.flatten_values();
  store.zero_grads();
  forward_backward(true);
  const Eigen::VectorXd analytic = store.flatten_grads();
  auto value_at = [&](const Eigen::VectorXd& x) {
    store.unflatten_values(x);
    return forward_backward(false);
  };
  const double err = nn::grad_check(value_at, point, analytic).max_rel_err;
  store.unflatten_values(point);
  return err;
}

int run_selfcheck() {
  bool all_ok = true;
  Rng rng(2026);

  {  // gradient checks over the differentiable stack
    EnsemblePolicy<double> policy(ProblemKind::kCvrp,
                                  PolicyConfig::preset("micro"), 11);
    GenConfig gen;
    gen.scale_sampler = FixedScale{6};
    const Instance inst = gen_instance(gen, ProblemKind::kCvrp, rng);
    const auto starts = default_start_nodes(inst, 6);
    Rng rollout_rng(3);
    const auto trajectories = run_rollouts(
        policy, inst, inst, starts, SelectMode::kSample, &rollout_rng);
    std::vector<double> rewards;
    for (const auto& t : trajectories) rewards.push_back(t.reward());
    const auto weights = rs_weights(rewards, 4);

    const double err = param_grad_check(policy.params(), [&](bool backward) {
      return replay_loss(policy, inst, trajectories, weights, 0.25, backward);
    });
    all_ok &= report_check("policy-gradient loss gradients", err < 1e-4,
                           "max rel err " + std::to_string(err));
  }

  {  // top-xi weighting against a rank-counting reference
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
      const int count = static_cast<int>(rng.uniform_int(1, 10));
      const int xi = static_cast<int>(rng.uniform_int(1, count));
      std::vector<double> rewards(count);
      for (auto& r : rewards) r = -static_cast<double>(rng.uniform_int(0, 5));
      const auto fast = rs_weights(rewards, xi);
      // reference: rank by counting, literal formula
      std::vector<double> ref(count, 0.0);
      std::vector<int> rank(count, 0);
      for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
          if (rewards[j] > rewards[i] ||
              (rewards[j] == rewards[i] && j < i))
            ++rank[i];
      double baseline = 0, amax = 0;
      for (int i = 0; i < count; ++i)
        if (rank[i] == xi - 1) baseline = rewards[i];
      for (int i = 0; i < count; ++i)
        if (rank[i] < xi) amax = std::max(amax, rewards[i] - baseline);
      if (amax > 0)
        for (int i = 0; i < count; ++i)
          if (rank[i] < xi) ref[i] = (rewards[i] - baseline) / amax;
      ok = fast == ref;
    }
    all_ok &= report_check("top-xi trajectory weights", ok, "2000 samples");
  }

  {  // signed-rank exactness against full enumeration
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      const int n = static_cast<int>(rng.uniform_int(1, 8));
      std::vector<double> a(n), b(n);
      for (int i = 0; i < n; ++i) {
        a[i] = static_cast<double>(rng.uniform_int(0, 3));
        b[i] = static_cast<double>(rng.uniform_int(0, 3));
      }
      const auto result = wilcoxon_one_sided(a, b);
      // enumeration
      std::vector<double> diffs;
      for (int i = 0; i < n; ++i)
        if (a[i] != b[i]) diffs.push_back(a[i] - b[i]);
      double expected = 1.0;
      if (!diffs.empty()) {
        const int m = static_cast<int>(diffs.size());
        std::vector<double> ranks(m);
        for (int i = 0; i < m; ++i) {
          int less = 0, equal = 0;
          for (int j = 0; j < m; ++j) {
            if (std::abs(diffs[j]) < std::abs(diffs[i])) ++less;
            if (std::abs(diffs[j]) == std::abs(diffs[i])) ++equal;
          }
          ranks[i] = less + (equal + 1) / 2.0;
        }
        double observed = 0;
        for (int i = 0; i < m; ++i)
          if (diffs[i] > 0) observed += ranks[i];
        long long hits = 0;
        for (long long mask = 0; mask < (1LL << m); ++mask) {
          double w = 0;
          for (int i = 0; i < m; ++i)
            if (mask & (1LL << i)) w += ranks[i];
          if (w >= observed) ++hits;
        }
        expected = static_cast<double>(hits) / static_cast<double>(1LL << m);
      }
      ok = std::abs(result.p_value - expected) < 1e-12;
    }
    all_ok &= report_check("signed-rank exact p-values", ok, "100 samples");
  }

  {  // parser round trip on a built-in fixture
    const char* fixture =
        "NAME : selfcheck\nTYPE : CVRP\nDIMENSION : 4\n"
        "EDGE_WEIGHT_TYPE : EUC_2D\nCAPACITY : 10\nNODE_COORD_SECTION\n"
        "1 0 0\n2 3.5 0\n3 0 4.25\n4 1 1\nDEMAND_SECTION\n"
        "1 0\n2 4\n3 5\n4 2\nDEPOT_SECTION\n1\n-1\nEOF\n";
    const auto first = parse_vrplib(fixture);
    const auto second = parse_vrplib(write_vrplib(first.instance, first.meta));
    all_ok &= report_check("instance writer round trip",
                           first.instance == second.instance, "");
  }

  {  // greedy feasibility on random instances
    EnsemblePolicy<float> policy(ProblemKind::kCvrp,
                                 PolicyConfig::preset("micro"), 17);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      GenConfig gen;
      gen.scale_sampler = FixedScale{static_cast<int>(rng.uniform_int(5, 40))};
      const Instance inst = gen_instance(gen, ProblemKind::kCvrp, rng);
      SolveOptions opts;
      opts.max_starts = 2;
      const auto result = solve_instance(policy, inst, opts);
      ok = !feasibility_check(inst, result.solution.tour).has_value();
    }
    all_ok &= report_check("untrained greedy feasibility", ok, "20 instances");
  }

  if (!all_ok) {
    std::cerr << "selfcheck failed\n";
    return 2;
  }
  std::cout << "selfcheck passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enroute: routing construction solver and training bench"};
  app.require_subcommand(1);
  // key=value config file; subcommand options live in sections, e.g. [train]
  app.set_config("--config", "", "config file with [subcommand] sections");

  GenerateOptions gen_opts;
  CLI::App* generate =
      app.add_subcommand("generate", "write random instances to files");
  generate->add_option("--kind", gen_opts.kind, "tsp or cvrp")
      ->check(CLI::IsMember({"tsp", "cvrp"}));
  generate->add_option("--count", gen_opts.count, "number of instances");
  generate->add_option("--n", gen_opts.n, "customers per instance");
  generate->add_option("--n-min", gen_opts.n_min, "scale range lower bound");
  generate->add_option("--n-max", gen_opts.n_max, "scale range upper bound");
  generate->add_option("--seed", gen_opts.seed, "generator seed");
  generate->add_option("--out-dir", gen_opts.out_dir, "output directory");
  generate->add_option("--prefix", gen_opts.prefix, "file name prefix");
  generate->add_option("--coord-scale", gen_opts.coord_scale,
                       "grid scale for written coordinates (0: raw)");

  TrainCliOptions train_opts;
  CLI::App* train_cmd =
      app.add_subcommand("train", "policy-gradient training");
  train_cmd->add_option("--kind", train_opts.kind, "tsp or cvrp")
      ->check(CLI::IsMember({"tsp", "cvrp"}));
  train_cmd->add_option("--preset", train_opts.config.preset,
                        "default, tiny or micro");
  train_cmd->add_option("--steps", train_opts.config.steps, "training steps");
  train_cmd->add_option("--scale", train_opts.scale,
                        "customer count, fixed ('100') or range ('100:500')");
  train_cmd->add_option("--bs-init", train_opts.config.bs_init,
                        "batch size at N=100");
  train_cmd->add_option("--max-batch", train_opts.config.max_batch,
                        "memory cap on the batch rule");
  train_cmd->add_option("--max-starts", train_opts.config.max_starts,
                        "memory cap on rollouts per instance");
  train_cmd->add_option("--xi", train_opts.config.xi,
                        "top trajectories kept by the risk-seeking update");
  train_cmd->add_option("--baseline", train_opts.baseline,
                        "rs (top-xi) or shared (mean)")
      ->check(CLI::IsMember({"rs", "shared"}));
  train_cmd->add_option("--lr", train_opts.config.adam.learning_rate,
                        "Adam learning rate");
  train_cmd->add_option("--seed", train_opts.config.seed, "training seed");
  train_cmd->add_option("--validate-every", train_opts.config.validate_every,
                        "validation cadence in steps (0: ends only)");
  train_cmd->add_option("--val-scale", train_opts.val_scales,
                        "validation set scales");
  train_cmd->add_option("--val-capacity", train_opts.val_capacities,
                        "fixed capacities for the validation sets");
  train_cmd->add_option("--val-instances", train_opts.val_instances,
                        "instances per validation set");
  train_cmd->add_option("--curve", train_opts.config.curve_path,
                        "training curve CSV path");
  train_cmd->add_option("--out", train_opts.config.checkpoint_path,
                        "checkpoint output path");
  train_cmd->add_option("--checkpoint-every",
                        train_opts.config.checkpoint_every,
                        "periodic checkpoint cadence");
  train_cmd->add_option("--mode", train_opts.mode,
                        "small (fixed scale) or varying (requires --init-from)")
      ->check(CLI::IsMember({"small", "varying"}));
  train_cmd->add_option("--init-from", train_opts.init_from,
                        "checkpoint to continue from");
  train_cmd->add_option("--precision", train_opts.precision, "f32 or f64")
      ->check(CLI::IsMember({"f32", "f64"}));
  train_cmd->add_option("--extra-local-k", train_opts.extra_local_k,
                        "neighbor counts of additional local scorers "
                        "(ensemble averages all local scores)");

  SolveCliOptions solve_opts;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "solve instance files with a checkpoint");
  solve_cmd->add_option("--checkpoint", solve_opts.checkpoint, "model file")
      ->required();
  solve_cmd->add_option("inputs", solve_opts.inputs, "instance files")
      ->required();
  solve_cmd->add_option("--out-dir", solve_opts.out_dir,
                        "solution output directory");
  solve_cmd->add_option("--max-starts", solve_opts.max_starts,
                        "multi-start rollout cap");
  solve_cmd->add_option("--normalize", solve_opts.normalize,
                        "auto, always or never")
      ->check(CLI::IsMember({"auto", "always", "never"}));
  solve_cmd->add_option("--mode", solve_opts.mode, "greedy or sample")
      ->check(CLI::IsMember({"greedy", "sample"}));
  solve_cmd->add_option("--seed", solve_opts.seed, "sampling seed");

  BenchCliOptions bench_opts;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "evaluate a checkpoint against reference values");
  bench_cmd->add_option("--checkpoint", bench_opts.checkpoint, "model file")
      ->required();
  bench_cmd->add_option("--dir", bench_opts.dir, "directory of instances")
      ->required();
  bench_cmd->add_option("--bks", bench_opts.bks, "reference CSV 'name,bks'")
      ->required();
  bench_cmd->add_option("--records", bench_opts.records,
                        "per-instance records CSV output");
  bench_cmd->add_option("--method", bench_opts.method,
                        "method tag stored in the records");
  bench_cmd->add_option("--max-starts", bench_opts.max_starts,
                        "multi-start rollout cap");
  bench_cmd->add_option("--normalize", bench_opts.normalize,
                        "auto, always or never")
      ->check(CLI::IsMember({"auto", "always", "never"}));

  ReportCliOptions report_opts;
  CLI::App* report_cmd =
      app.add_subcommand("report", "tables and plots from records");
  report_cmd->add_option("--records", report_opts.records, "records CSV")
      ->required();
  report_cmd->add_option("--curve", report_opts.curve, "training curve CSV");
  report_cmd->add_option("--out-dir", report_opts.out_dir, "output directory");
  report_cmd
      ->add_option("--wilcoxon", report_opts.wilcoxon,
                   "two method tags: test that the first has no larger gaps")
      ->expected(2);

  CLI::App* selfcheck_cmd = app.add_subcommand(
      "selfcheck", "run gradient checks and oracle suites");
  (void)selfcheck_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) return run_generate(gen_opts);
    if (train_cmd->parsed()) return run_train(train_opts);
    if (solve_cmd->parsed()) return run_solve(solve_opts);
    if (bench_cmd->parsed()) return run_bench(bench_opts);
    if (report_cmd->parsed()) return run_report(report_opts);
    if (selfcheck_cmd->parsed()) return run_selfcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
