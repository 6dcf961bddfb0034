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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "enroute/trainer.hpp"
#include "oracles.hpp"

using namespace enroute;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TrainConfig mini_config() {
  TrainConfig config;
  config.kind = ProblemKind::kTsp;
  config.preset = "micro";
  config.scale = FixedScale{6};
  config.steps = 60;
  config.bs_init = 4;
  config.max_batch = 4;
  config.max_starts = 6;
  config.xi = 4;
  config.adam.learning_rate = 3e-3;
  config.seed = 12345;
  config.validation = {{6, 0.0, 12}};
  return config;
}

}  // namespace

TEST_CASE("rs weights follow the top-xi rule") {
  const auto weights = rs_weights({-1, -2, -3, -4}, 2);
  CHECK(weights == std::vector<double>{1, 0, 0, 0});

  // Degenerate xi = 1: the single best trajectory has zero advantage.
  const auto solo = rs_weights({-1, -2, -3}, 1);
  CHECK(solo == std::vector<double>{0, 0, 0});

  // Fully tied rewards carry no gradient.
  const auto tied = rs_weights({-2, -2, -2}, 2);
  CHECK(tied == std::vector<double>{0, 0, 0});

  CHECK_THROWS_AS(rs_weights({-1.0}, 2), Error);
}

TEST_CASE("rs weights match the independent reference") {
  Rng rng(71);
  for (int trial = 0; trial < 10000; ++trial) {
    const int count = static_cast<int>(rng.uniform_int(1, 12));
    const int xi = static_cast<int>(rng.uniform_int(1, count));
    std::vector<double> rewards(count);
    for (int i = 0; i < count; ++i) {
      // Coarse grid provokes reward ties.
      rewards[i] = -static_cast<double>(rng.uniform_int(0, 6));
    }
    const auto ours = rs_weights(rewards, xi);
    const auto reference = oracle::rs_weights_reference(rewards, xi);
    REQUIRE(ours.size() == reference.size());
    for (int i = 0; i < count; ++i) CHECK(ours[i] == reference[i]);
    for (int i = 0; i < count; ++i) {
      CHECK(ours[i] >= 0.0);
      CHECK(ours[i] <= 1.0);
    }
  }
}

TEST_CASE("shared baseline weights center the rewards") {
  const auto weights = shared_baseline_weights({-1, -3});
  CHECK(weights == std::vector<double>{1, -1});

  const auto tied = shared_baseline_weights({-2, -2, -2});
  CHECK(tied == std::vector<double>{0, 0, 0});

  Rng rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> rewards(8);
    for (auto& r : rewards) r = rng.uniform(-10, 0);
    const auto w = shared_baseline_weights(rewards);
    double sum = 0;
    for (double v : w) sum += v;
    CHECK(std::abs(sum) < 1e-9);
  }
}

TEST_CASE("zero training steps leave the parameters untouched") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 5);
  std::vector<ad::MatX<float>> before;
  for (std::size_t i = 0; i < policy.params().size(); ++i)
    before.push_back(policy.params().at(i).value);

  TrainConfig config = mini_config();
  config.steps = 0;
  config.checkpoint_path = "trainer_zero.ckpt";
  train(policy, config, TrainMode::kSmallScale);

  for (std::size_t i = 0; i < policy.params().size(); ++i)
    CHECK(policy.params().at(i).value == before[i]);

  const auto data = read_checkpoint("trainer_zero.ckpt");
  CHECK(data.meta.at("schedule.small_scale_early_stop") == "200000");
  CHECK(data.meta.at("schedule.varying_scale_steps") == "50000");
  CHECK(data.meta.at("train.precision") == "f32");
  std::remove("trainer_zero.ckpt");
}

TEST_CASE("varying-scale training insists on a prior checkpoint") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 5);
  TrainConfig config = mini_config();
  CHECK_THROWS_AS(train(policy, config, TrainMode::kVaryingScale, false),
                  Error);
}

TEST_CASE("a short run learns on tiny tsp instances") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 5);
  TrainConfig config = mini_config();
  const auto result = train(policy, config, TrainMode::kSmallScale);
  CHECK(result.steps_run == config.steps);
  CHECK(result.final_validation_mean < result.first_validation_mean);
  // curve: two validation sets rows (start and end) for the single set
  CHECK(result.curve.size() == 2);
}

TEST_CASE("a short run learns on tiny cvrp instances") {
  EnsemblePolicy<float> policy(ProblemKind::kCvrp,
                               PolicyConfig::preset("micro"), 6);
  TrainConfig config = mini_config();
  config.kind = ProblemKind::kCvrp;
  config.steps = 80;
  config.validation = {{6, 12.0, 12}};
  const auto result = train(policy, config, TrainMode::kSmallScale);
  CHECK(result.final_validation_mean < result.first_validation_mean);
}

TEST_CASE("training is bit-reproducible") {
  auto run = [](const std::string& path) {
    EnsemblePolicy<float> policy(ProblemKind::kTsp,
                                 PolicyConfig::preset("micro"), 5);
    TrainConfig config = mini_config();
    config.steps = 8;
    config.checkpoint_path = path;
    train(policy, config, TrainMode::kSmallScale);
  };
  run("trainer_det_a.ckpt");
  run("trainer_det_b.ckpt");
  CHECK(read_file("trainer_det_a.ckpt") == read_file("trainer_det_b.ckpt"));
  std::remove("trainer_det_a.ckpt");
  std::remove("trainer_det_b.ckpt");
}

TEST_CASE("checkpoints round-trip through the container") {
  EnsemblePolicy<float> policy(ProblemKind::kCvrp,
                               PolicyConfig::preset("micro"), 9);
  std::map<std::string, std::string> meta =
      policy.config().to_meta(policy.kind());
  meta["custom"] = "value with spaces";
  write_checkpoint("roundtrip.ckpt", policy.params(), meta, "12 34 56");

  const auto data = read_checkpoint("roundtrip.ckpt");
  CHECK(data.scalar_width == 4);
  CHECK(data.meta.at("custom") == "value with spaces");
  CHECK(data.rng_state == "12 34 56");

  // Loading into a same-shape policy reproduces every array bitwise.
  EnsemblePolicy<float> other(ProblemKind::kCvrp,
                              PolicyConfig::preset("micro"), 1234);
  assign_params(other.params(), data);
  for (std::size_t i = 0; i < policy.params().size(); ++i)
    CHECK(other.params().at(i).value == policy.params().at(i).value);

  // Mismatched architecture is rejected.
  EnsemblePolicy<float> narrow(ProblemKind::kCvrp,
                               PolicyConfig::preset("tiny"), 1);
  CHECK_THROWS_AS(assign_params(narrow.params(), data), Error);
  std::remove("roundtrip.ckpt");
}

TEST_CASE("validation is deterministic and bounded by the optimum") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 21);
  const auto instances =
      make_validation_set(ProblemKind::kTsp, {7, 0.0, 6}, Rng(99));
  const double a = validate(policy, instances, 7);
  const double b = validate(policy, instances, 7);
  CHECK(a == b);

  double optimum_sum = 0.0;
  for (const auto& inst : instances)
    optimum_sum += oracle::brute_force_tsp(inst);
  CHECK(a >= optimum_sum / instances.size() - 1e-9);  // gap is nonnegative
}

TEST_CASE("curve file has one row per validation event") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 5);
  TrainConfig config = mini_config();
  config.steps = 6;
  config.validate_every = 2;
  config.curve_path = "trainer_curve.csv";
  const auto result = train(policy, config, TrainMode::kSmallScale);

  std::ifstream in("trainer_curve.csv");
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "step,val_set,mean_cost");
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(result.curve.size()));
  // step 0, steps 2 and 4 mid-run, step 6 final
  CHECK(rows == 4);
  std::remove("trainer_curve.csv");
}

TEST_CASE("periodic checkpoints are written on the cadence") {
  EnsemblePolicy<float> policy(ProblemKind::kTsp,
                               PolicyConfig::preset("micro"), 5);
  TrainConfig config = mini_config();
  config.steps = 6;
  config.checkpoint_every = 3;
  config.checkpoint_path = "trainer_cadence.ckpt";
  train(policy, config, TrainMode::kSmallScale);
  CHECK(std::ifstream("trainer_cadence.ckpt.step3").good());
  CHECK(std::ifstream("trainer_cadence.ckpt.step6").good());
  CHECK(std::ifstream("trainer_cadence.ckpt").good());
  const auto periodic = read_checkpoint("trainer_cadence.ckpt.step3");
  CHECK(periodic.meta.at("train.steps_run") == "3");
  std::remove("trainer_cadence.ckpt.step3");
  std::remove("trainer_cadence.ckpt.step6");
  std::remove("trainer_cadence.ckpt");
}

TEST_CASE("one replay touches both parameter namespaces") {
  Rng rng(81);
  EnsemblePolicy<double> policy(ProblemKind::kCvrp,
                                PolicyConfig::preset("micro"), 61);
  GenConfig gen;
  gen.scale_sampler = FixedScale{8};
  const Instance inst = gen_instance(gen, ProblemKind::kCvrp, rng);
  const auto starts = default_start_nodes(inst, 8);
  Rng rollout_rng(5);
  const auto trajectories =
      run_rollouts(policy, inst, inst, starts, SelectMode::kSample,
                   &rollout_rng);
  std::vector<double> rewards;
  for (const auto& t : trajectories) rewards.push_back(t.reward());
  const auto weights = rs_weights(rewards, 4);

  policy.params().zero_grads();
  replay_and_backward(policy, inst, trajectories, weights, 0.25);

  double global_norm = 0, local_norm = 0;
  for (std::size_t i = 0; i < policy.params().size(); ++i) {
    const auto& p = policy.params().at(i);
    if (p.name.rfind("global/", 0) == 0) global_norm += p.grad.squaredNorm();
    if (p.name.rfind("local/", 0) == 0) local_norm += p.grad.squaredNorm();
  }
  CHECK(global_norm > 0.0);
  CHECK(local_norm > 0.0);
}
