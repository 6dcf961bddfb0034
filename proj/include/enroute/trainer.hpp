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

#ifndef ENROUTE_TRAINER_HPP_
#define ENROUTE_TRAINER_HPP_

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "enroute/checkpoint.hpp"
#include "enroute/rollout.hpp"

namespace enroute {

// Top-xi trajectory weighting: the xi-th best reward is the baseline, the
// advantages A_i = R_i - R_xi are divided by their maximum, everything
// outside the top xi gets weight zero. Returned in the input order. A fully
// tied top group yields all-zero weights (the caller skips the update).
std::vector<double> rs_weights(const std::vector<double>& rewards, int xi);

// Mean-reward baseline: weight_i = R_i - mean(R).
std::vector<double> shared_baseline_weights(const std::vector<double>& rewards);

enum class BaselineKind { kRiskSeeking, kShared };
enum class TrainMode { kSmallScale, kVaryingScale };

// Schedule constants of the reference training recipe; echoed into every
// checkpoint regardless of how many steps a run actually executes.
constexpr int kSmallScaleEarlyStopSteps = 200000;
constexpr int kVaryingScaleSteps = 50000;

struct ValidationSetSpec {
  int scale = 100;
  double capacity = 50.0;  // fixed capacity (CVRP); ignored for TSP
  int instances = 32;
};

struct TrainConfig {
  ProblemKind kind = ProblemKind::kTsp;
  std::string preset = "default";
  ScaleSampler scale = FixedScale{100};
  int steps = 1000;
  int bs_init = 120;
  int max_batch = 64;    // memory budget cap on the batch rule
  int max_starts = 1000; // rollouts per instance = min(N, max_starts)
  int xi = 20;
  BaselineKind baseline = BaselineKind::kRiskSeeking;
  nn::AdamOptions adam;
  std::uint64_t seed = 1;
  int validate_every = 0;  // 0: only before and after training
  std::vector<ValidationSetSpec> validation;
  std::string curve_path;       // CSV "step,val_set,mean_cost" when set
  std::string checkpoint_path;  // written at the end when set
  int checkpoint_every = 0;     // additional periodic saves when > 0
};

struct CurveRow {
  int step = 0;
  std::string val_set;
  double mean_cost = 0.0;
};

struct TrainResult {
  int steps_run = 0;
  std::vector<CurveRow> curve;
  double first_validation_mean = 0.0;  // mean over validation sets at step 0
  double final_validation_mean = 0.0;
  double last_loss = 0.0;
};

template <class Scalar>
double validate(const EnsemblePolicy<Scalar>& policy,
                const std::vector<Instance>& instances, int max_starts) {
  double total = 0.0;
  SolveOptions opts;
  opts.mode = SelectMode::kGreedy;
  opts.max_starts = max_starts;
  opts.normalize = NormalizePolicy::kNever;
  for (const Instance& inst : instances)
    total += solve_instance(policy, inst, opts).solution.objective;
  return total / static_cast<double>(instances.size());
}

inline std::vector<Instance> make_validation_set(ProblemKind kind,
                                                 const ValidationSetSpec& spec,
                                                 Rng rng) {
  GenConfig gen;
  gen.scale_sampler = FixedScale{spec.scale};
  std::vector<Instance> out;
  out.reserve(spec.instances);
  for (int i = 0; i < spec.instances; ++i) {
    Instance inst = gen_instance(gen, kind, rng);
    if (kind == ProblemKind::kCvrp) {
      inst.capacity = spec.capacity;
      // Fixed-capacity sets assume demands <= Q; clamp the rare violator.
      for (int c = 1; c < inst.node_count(); ++c)
        inst.demands(c) = std::min(inst.demands(c), inst.capacity);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

template <class Scalar>
std::map<std::string, std::string> train_meta(
    const EnsemblePolicy<Scalar>& policy, const TrainConfig& config,
    TrainMode mode, int steps_run) {
  auto meta = policy.config().to_meta(policy.kind());
  meta["train.mode"] =
      mode == TrainMode::kVaryingScale ? "varying_scale" : "small_scale";
  meta["train.preset"] = config.preset;
  meta["train.steps_run"] = std::to_string(steps_run);
  meta["train.bs_init"] = std::to_string(config.bs_init);
  meta["train.max_batch"] = std::to_string(config.max_batch);
  meta["train.max_starts"] = std::to_string(config.max_starts);
  meta["train.xi"] = std::to_string(config.xi);
  meta["train.baseline"] = config.baseline == BaselineKind::kShared
                               ? "shared"
                               : "risk_seeking";
  meta["train.lr"] = std::to_string(config.adam.learning_rate);
  meta["train.adam_beta1"] = std::to_string(config.adam.beta1);
  meta["train.adam_beta2"] = std::to_string(config.adam.beta2);
  meta["train.adam_eps"] = std::to_string(config.adam.epsilon);
  meta["train.seed"] = std::to_string(config.seed);
  meta["train.precision"] = sizeof(Scalar) == 8 ? "f64" : "f32";
  if (const auto* fixed = std::get_if<FixedScale>(&config.scale)) {
    meta["train.scale"] = std::to_string(fixed->n);
  } else {
    const auto range = std::get<UniformScaleRange>(config.scale);
    meta["train.scale"] =
        "U(" + std::to_string(range.lo) + "," + std::to_string(range.hi) + ")";
  }
  meta["schedule.small_scale_early_stop"] =
      std::to_string(kSmallScaleEarlyStopSteps);
  meta["schedule.varying_scale_steps"] = std::to_string(kVaryingScaleSteps);
  return meta;
}

template <class Scalar>
double replay_loss(EnsemblePolicy<Scalar>& policy, const Instance& inst,
                   const std::vector<TrajectoryRecord>& trajectories,
                   const std::vector<double>& weights, double norm,
                   bool backward);

template <class Scalar>
double replay_and_backward(EnsemblePolicy<Scalar>& policy,
                           const Instance& inst,
                           const std::vector<TrajectoryRecord>& trajectories,
                           const std::vector<double>& weights, double norm) {
  return replay_loss(policy, inst, trajectories, weights, norm, true);
}

// Joint policy-gradient training. Per step: sample a scale, generate a batch,
// run one sampled rollout per start node, weight the trajectories, replay the
// weighted ones on a recording tape and take one optimizer step on the summed
// loss. Throws on non-finite losses or gradients with a diagnostic message.
template <class Scalar>
TrainResult train(EnsemblePolicy<Scalar>& policy, const TrainConfig& config,
                  TrainMode mode, bool has_prior_checkpoint = false) {
  if (mode == TrainMode::kVaryingScale && !has_prior_checkpoint)
    throw Error("varying-scale training requires a prior checkpoint");
  if (config.xi < 1) throw Error("train: xi must be at least 1");

  Rng master(config.seed);
  Rng data_rng = master.fork(1);
  Rng rollout_rng = master.fork(2);
  Rng validation_rng = master.fork(3);

  std::vector<std::vector<Instance>> validation_sets;
  std::vector<std::string> validation_names;
  for (const auto& spec : config.validation) {
    validation_sets.push_back(
        make_validation_set(policy.kind(), spec,
                            validation_rng.fork(spec.scale)));
    validation_names.push_back("N" + std::to_string(spec.scale));
  }

  nn::Adam<Scalar> adam(policy.params(), config.adam);
  TrainResult result;

  std::ofstream curve;
  if (!config.curve_path.empty()) {
    curve.open(config.curve_path);
    if (!curve) throw Error("cannot write curve file: " + config.curve_path);
    curve << "step,val_set,mean_cost\n";
  }

  auto run_validation = [&](int step) {
    double sum = 0.0;
    for (std::size_t v = 0; v < validation_sets.size(); ++v) {
      const double mean_cost =
          validate(policy, validation_sets[v], config.max_starts);
      result.curve.push_back({step, validation_names[v], mean_cost});
      if (curve.is_open())
        curve << step << "," << validation_names[v] << "," << mean_cost
              << "\n";
      sum += mean_cost;
    }
    return validation_sets.empty()
               ? 0.0
               : sum / static_cast<double>(validation_sets.size());
  };

  result.first_validation_mean = run_validation(0);

  GenConfig gen;
  for (int step = 1; step <= config.steps; ++step) {
    const int scale = sample_scale(config.scale, data_rng);
    gen.scale_sampler = FixedScale{scale};
    const int batch =
        std::min(batch_size_for(scale, config.bs_init), config.max_batch);

    policy.params().zero_grads();
    double loss_sum = 0.0;
    int contributing = 0;

    for (int b = 0; b < batch; ++b) {
      const Instance inst = gen_instance(gen, policy.kind(), data_rng);
      const auto starts = default_start_nodes(inst, config.max_starts);
      const auto trajectories = run_rollouts(
          policy, inst, inst, starts, SelectMode::kSample, &rollout_rng);

      std::vector<double> rewards(trajectories.size());
      for (std::size_t i = 0; i < trajectories.size(); ++i)
        rewards[i] = trajectories[i].reward();

      std::vector<double> weights;
      double norm;
      if (config.baseline == BaselineKind::kRiskSeeking) {
        const int xi =
            std::min<int>(config.xi, static_cast<int>(rewards.size()));
        weights = rs_weights(rewards, xi);
        norm = 1.0 / xi;
      } else {
        weights = shared_baseline_weights(rewards);
        norm = 1.0 / static_cast<double>(weights.size());
      }

      bool any = false;
      for (double w : weights) any = any || w != 0.0;
      if (!any) continue;  // fully tied rewards carry no signal

      loss_sum += replay_and_backward(policy, inst, trajectories, weights,
                                      norm);
      ++contributing;
    }

    result.steps_run = step;
    if (contributing == 0) continue;  // every instance fully tied
    if (!std::isfinite(loss_sum))
      throw Error("train: non-finite loss at step " + std::to_string(step));
    policy.params().scale_grads(Scalar(1.0 / contributing));
    adam.step();
    result.last_loss = loss_sum / contributing;

    if (config.validate_every > 0 && step % config.validate_every == 0 &&
        step != config.steps)
      run_validation(step);
    if (config.checkpoint_every > 0 && step % config.checkpoint_every == 0 &&
        !config.checkpoint_path.empty()) {
      write_checkpoint(config.checkpoint_path + ".step" + std::to_string(step),
                       policy.params(), train_meta(policy, config, mode, step),
                       master.serialize());
    }
  }

  result.final_validation_mean = run_validation(config.steps);

  if (!config.checkpoint_path.empty())
    write_checkpoint(config.checkpoint_path, policy.params(),
                     train_meta(policy, config, mode, config.steps),
                     master.serialize());
  return result;
}

// Replays the weighted trajectories of one instance and evaluates the loss
// -norm * sum_i w_i log pi(tau_i); with `backward` set the gradients are
// accumulated into the parameter store.
template <class Scalar>
double replay_loss(EnsemblePolicy<Scalar>& policy, const Instance& inst,
                   const std::vector<TrajectoryRecord>& trajectories,
                   const std::vector<double>& weights, double norm,
                   bool backward) {
  std::vector<int> selected;
  for (std::size_t i = 0; i < trajectories.size(); ++i)
    if (weights[i] != 0.0) selected.push_back(static_cast<int>(i));
  if (selected.empty()) return 0.0;

  nn::Tape<Scalar> tape(backward);
  const auto enc = policy.encode(tape, inst);

  std::vector<int> starts;
  for (int idx : selected) starts.push_back(trajectories[idx].start);
  auto states = reset(inst, starts);
  std::vector<std::size_t> cursor(selected.size(), 0);

  nn::Var<Scalar> loss =
      tape.constant(ad::MatX<Scalar>::Zero(1, 1));
  while (true) {
    std::vector<int> active;
    std::vector<const ConstructionState*> rows;
    std::vector<int> actions;
    ad::VecX<Scalar> row_weights;
    for (std::size_t j = 0; j < selected.size(); ++j) {
      const auto& traj = trajectories[selected[j]];
      if (cursor[j] < traj.actions.size()) {
        active.push_back(static_cast<int>(j));
        rows.push_back(&states[j]);
        actions.push_back(traj.actions[cursor[j]]);
      }
    }
    if (active.empty()) break;
    row_weights.resize(static_cast<Eigen::Index>(active.size()));
    for (std::size_t r = 0; r < active.size(); ++r)
      row_weights(static_cast<Eigen::Index>(r)) =
          static_cast<Scalar>(weights[selected[active[r]]]);

    const ad::BoolMat valid = batch_mask(rows, inst.node_count());
    const auto scores = policy.step_scores(tape, enc, rows, valid);
    nn::Var<Scalar> logits = policy.clipped_logits(tape, scores);
    nn::Var<Scalar> logp = ad::log_prob_pick(logits, valid, actions);
    loss = ad::add(loss, ad::dot_const(logp, row_weights));

    for (std::size_t r = 0; r < active.size(); ++r) {
      apply_step(states[active[r]], actions[r]);
      ++cursor[active[r]];
    }
  }

  loss = ad::scale(loss, static_cast<Scalar>(-norm));
  const double value = static_cast<double>(loss.value()(0, 0));
  if (backward) {
    tape.backward(loss);
    if (!policy.params().grads_finite())
      throw Error("train: non-finite gradient during replay");
  }
  return value;
}

}  // namespace enroute

#endif  // ENROUTE_TRAINER_HPP_
