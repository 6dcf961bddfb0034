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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "enroute/stats.hpp"
#include "enroute/trainer.hpp"
#include "enroute/vrplib.hpp"
#include "oracles.hpp"

using namespace enroute;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double param_grad_check(nn::ParamStore<double>& store,
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

Instance random_instance(ProblemKind kind, int n, Rng& rng) {
  GenConfig gen;
  gen.scale_sampler = FixedScale{n};
  return gen_instance(gen, kind, rng);
}

// ---------------------------------------------------------------------------
// Criterion: every differentiable operation passes float64 finite-difference
// checks below 1e-4 max relative error.
void criterion_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  std::string worst_name = "-";
  auto track = [&](const std::string& name, double err) {
    if (err > worst) {
      worst = err;
      worst_name = name;
    }
  };

  {  // dense two-layer perceptron
    nn::ParamStore<double> store;
    Rng init(1);
    nn::Mlp<double> mlp(store, "mlp", 6, 12, 5, init);
    ad::MatX<double> x(3, 6);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    const Eigen::VectorXd mix = Eigen::VectorXd::LinSpaced(3, 0.4, 1.3);
    track("mlp", param_grad_check(store, [&](bool backward) {
      nn::Tape<double> tape(backward);
      auto out = mlp.forward(tape, tape.constant(x));
      auto loss = ad::dot_const(ad::row_sums(ad::vtanh(out)), mix);
      if (backward) tape.backward(loss);
      return loss.value()(0, 0);
    }));
  }

  {  // multi-head attention with a mask
    nn::ParamStore<double> store;
    Rng init(2);
    nn::MultiHeadAttention<double> mha(store, "mha", 8, 2, init);
    ad::MatX<double> tokens(5, 8);
    for (int i = 0; i < tokens.size(); ++i)
      tokens.data()[i] = rng.uniform(-1, 1);
    ad::BoolMat valid(5, 5);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 5; ++c) valid(r, c) = (r + c) % 4 != 1;
    const Eigen::VectorXd mix = Eigen::VectorXd::LinSpaced(5, -1.0, 1.0);
    track("attention", param_grad_check(store, [&](bool backward) {
      nn::Tape<double> tape(backward);
      auto t = tape.constant(tokens);
      auto out = mha.forward(tape, t, t, &valid);
      auto loss = ad::dot_const(ad::row_sums(ad::vtanh(out)), mix);
      if (backward) tape.backward(loss);
      return loss.value()(0, 0);
    }));
  }

  {  // score clipping (tanh scaled) and masked softmax, through parameters
    nn::ParamStore<double> store;
    Rng init(3);
    nn::Linear<double> lin(store, "lin", 4, 7, init);
    ad::MatX<double> x(2, 4);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    ad::BoolMat valid(2, 7);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 7; ++c) valid(r, c) = c % 3 != r;
    const Eigen::VectorXd mix = Eigen::VectorXd::LinSpaced(2, 0.7, 1.1);
    // Pick each row's most likely action: a near-impossible action would put
    // |log pi| in the tens and drown the difference quotient in rounding.
    std::vector<int> actions(2, 0);
    {
      nn::Tape<double> probe(false);
      auto scores = ad::scale(
          ad::vtanh(lin.forward(probe, probe.constant(x))), 50.0);
      for (int r = 0; r < 2; ++r) {
        double best = -1e300;
        for (int c = 0; c < 7; ++c)
          if (valid(r, c) && scores.value()(r, c) > best) {
            best = scores.value()(r, c);
            actions[r] = c;
          }
      }
    }
    track("clip+masked_softmax", param_grad_check(store, [&](bool backward) {
      nn::Tape<double> tape(backward);
      auto scores = ad::scale(ad::vtanh(lin.forward(tape, tape.constant(x))),
                              50.0);
      auto probs = ad::masked_softmax_rows(scores, valid);
      auto picked = ad::log_prob_pick(scores, valid, actions);
      auto loss = ad::add(ad::dot_const(picked, mix),
                          ad::scale(ad::sum_all(ad::vtanh(probs)), 0.25));
      if (backward) tape.backward(loss);
      return loss.value()(0, 0);
    }));
  }

  {  // full ensemble composite: encoder + query + glimpse + local + clip
    Rng data_rng(4);
    EnsemblePolicy<double> policy(ProblemKind::kCvrp,
                                  PolicyConfig::preset("micro"), 55);
    const Instance inst = random_instance(ProblemKind::kCvrp, 6, data_rng);
    auto states = reset(inst, {1, 3});
    std::vector<const ConstructionState*> rows = {&states[0], &states[1]};
    const ad::BoolMat valid = batch_mask(rows, inst.node_count());
    const Eigen::VectorXd mix = Eigen::VectorXd::LinSpaced(2, 0.8, 1.0);
    std::vector<int> actions(2, 0);
    {
      nn::Tape<double> probe(false);
      const auto enc = policy.encode(probe, inst);
      const auto scores = policy.step_scores(probe, enc, rows, valid);
      const auto probs = policy.step_distributions(probe, scores, valid);
      for (int r = 0; r < 2; ++r) {
        double best = -1.0;
        for (int c = 0; c < inst.node_count(); ++c)
          if (probs(r, c) > best) {
            best = probs(r, c);
            actions[r] = c;
          }
      }
    }
    track("ensemble_composite",
          param_grad_check(policy.params(), [&](bool backward) {
            nn::Tape<double> tape(backward);
            const auto enc = policy.encode(tape, inst);
            const auto scores = policy.step_scores(tape, enc, rows, valid);
            auto logits = policy.clipped_logits(tape, scores);
            auto loss =
                ad::dot_const(ad::log_prob_pick(logits, valid, actions), mix);
            if (backward) tape.backward(loss);
            return loss.value()(0, 0);
          }));
  }

  {  // the risk-seeking loss over frozen trajectories
    Rng data_rng(5);
    EnsemblePolicy<double> policy(ProblemKind::kTsp,
                                  PolicyConfig::preset("micro"), 66);
    const Instance inst = random_instance(ProblemKind::kTsp, 7, data_rng);
    const auto starts = default_start_nodes(inst, 7);
    Rng rollout_rng(6);
    const auto trajectories = run_rollouts(policy, inst, inst, starts,
                                           SelectMode::kSample, &rollout_rng);
    std::vector<double> rewards;
    for (const auto& t : trajectories) rewards.push_back(t.reward());
    const auto weights = rs_weights(rewards, 5);
    track("risk_seeking_loss",
          param_grad_check(policy.params(), [&](bool backward) {
            return replay_loss(policy, inst, trajectories, weights, 0.2,
                               backward);
          }));
  }

  report("gradient correctness", worst < 1e-4,
         "max rel err " + fmt(worst) + " (worst: " + worst_name + "), " +
             fmt(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// Criterion: 1,000 random CVRP instances solved greedily by an untrained
// ensemble are all feasible.
void criterion_feasibility() {
  const auto t0 = std::chrono::steady_clock::now();
  EnsemblePolicy<float> policy(ProblemKind::kCvrp,
                               PolicyConfig::preset("tiny"), 2026);
  Rng rng(31337);
  int feasible = 0;
  const int total = 1000;
  SolveOptions opts;
  opts.max_starts = 2;
  opts.normalize = NormalizePolicy::kNever;
  for (int i = 0; i < total; ++i) {
    const int n = static_cast<int>(rng.uniform_int(20, 200));
    const Instance inst = random_instance(ProblemKind::kCvrp, n, rng);
    const auto result = solve_instance(policy, inst, opts);
    if (!feasibility_check(inst, result.solution.tour).has_value()) ++feasible;
  }
  report("feasibility", feasible == total,
         std::to_string(feasible) + "/" + std::to_string(total) +
             " feasible, " + fmt(elapsed_s(t0)) + " s");
}

// ---------------------------------------------------------------------------
// Criterion: the top-xi weighting matches an independently coded reference
// on 10,000 random reward vectors, ties and degenerate xi included.
void criterion_rs_oracle() {
  Rng rng(4242);
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int count = static_cast<int>(rng.uniform_int(1, 16));
    int xi = static_cast<int>(rng.uniform_int(1, count));
    if (trial % 7 == 0) xi = 1;  // keep the degenerate case in rotation
    std::vector<double> rewards(count);
    const bool coarse = trial % 2 == 0;
    for (auto& r : rewards)
      r = coarse ? -static_cast<double>(rng.uniform_int(0, 5))
                 : rng.uniform(-10.0, 0.0);
    if (trial % 11 == 0)
      std::fill(rewards.begin(), rewards.end(), -3.0);  // all tied
    const auto ours = rs_weights(rewards, xi);
    const auto reference = oracle::rs_weights_reference(rewards, xi);
    if (ours != reference) ++mismatches;
  }
  report("risk-seeking weights oracle", mismatches == 0,
         std::to_string(10000 - mismatches) + "/10000 exact matches");
}

// ---------------------------------------------------------------------------
// Criterion: local features are invariant to uniform scaling and translation
// (bit-identical scores at float precision) and the zero-MLP argmax is the
// nearest valid neighbor on 1,000 random states.
void criterion_local_transfer() {
  Rng rng(777);
  nn::ParamStore<float> store;
  LocalPolicyConfig config;  // default K=100, penalty -1, hidden 512
  Rng init(1);
  LocalPolicy<float> policy(store, ProblemKind::kCvrp, config, init);

  int bit_mismatches = 0;
  int argmax_mismatches = 0;
  int states_checked = 0;
  while (states_checked < 1000) {
    const int n = static_cast<int>(rng.uniform_int(5, 60));
    const Instance inst = random_instance(ProblemKind::kCvrp, n, rng);
    auto state =
        reset(inst, {static_cast<int>(rng.uniform_int(1, n))}).front();
    const int hops = static_cast<int>(rng.uniform_int(0, n / 2));
    for (int h = 0; h < hops && !state.terminal(); ++h) {
      const Mask mask = action_mask(state);
      std::vector<int> valid;
      for (int i = 0; i < mask.size(); ++i)
        if (mask(i)) valid.push_back(i);
      apply_step(state, valid[rng.uniform_int(0, valid.size() - 1)]);
    }
    if (state.terminal()) continue;
    ++states_checked;

    const auto info = local_instance_info(inst);
    const auto base = policy.scores_single(state, info);

    // scaling (power of two and not), translation
    for (const double factor : {0.5, 4.0, 3.0}) {
      Instance scaled = inst;
      scaled.coords *= factor;
      ConstructionState moved = state;
      moved.instance = &scaled;
      const auto u = policy.scores_single(moved, local_instance_info(scaled));
      if (std::memcmp(u.data(), base.data(), sizeof(float) * u.size()) != 0)
        ++bit_mismatches;
    }
    {
      Instance shifted = inst;
      shifted.coords.array() += 0.37;
      ConstructionState moved = state;
      moved.instance = &shifted;
      const auto u =
          policy.scores_single(moved, local_instance_info(shifted));
      if (std::memcmp(u.data(), base.data(), sizeof(float) * u.size()) != 0)
        ++bit_mismatches;
    }

    // zero-MLP argmax = nearest valid neighbor
    LocalPolicy<float>* zero_policy = [&]() -> LocalPolicy<float>* {
      static nn::ParamStore<float> zero_store;
      static Rng zero_init(2);
      static LocalPolicy<float> zp(zero_store, ProblemKind::kCvrp, config,
                                   zero_init);
      static bool zeroed = false;
      if (!zeroed) {
        for (std::size_t i = 0; i < zero_store.size(); ++i)
          zero_store.at(i).value.setZero();
        zeroed = true;
      }
      return &zp;
    }();
    const auto u = zero_policy->scores_single(state, info);
    const Mask mask = action_mask(state);
    int best = -1;
    float best_u = -std::numeric_limits<float>::infinity();
    int nearest = -1;
    double nearest_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < mask.size(); ++i) {
      if (!mask(i)) continue;
      if (u(i) > best_u) {
        best_u = u(i);
        best = i;
      }
      const double dist = inst.euclidean(state.current, i);
      if (dist < nearest_dist) {
        nearest_dist = dist;
        nearest = i;
      }
    }
    if (best != nearest) ++argmax_mismatches;
  }
  report("local-feature transferability",
         bit_mismatches == 0 && argmax_mismatches == 0,
         "bit mismatches " + std::to_string(bit_mismatches) +
             ", argmax mismatches " + std::to_string(argmax_mismatches) +
             " over 1000 states");
}

// ---------------------------------------------------------------------------
// Criterion: encoder permutation equivariance within 1e-5 on 100 instances.
void criterion_equivariance() {
  Rng rng(888);
  nn::ParamStore<double> store;
  GlobalPolicyConfig config;
  config.embed_dim = 32;
  config.layers = 2;
  config.heads = 4;
  config.ff_dim = 64;
  Rng init(3);
  GlobalPolicy<double> policy(store, ProblemKind::kTsp, config, init);

  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(5, 30));
    const Instance inst = random_instance(ProblemKind::kTsp, n, rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    Instance shuffled = inst;
    for (int i = 0; i < n; ++i)
      shuffled.coords.row(i) = inst.coords.row(perm[i]);

    nn::Tape<double> tape(false);
    const auto h = policy.encode(tape, inst).embeddings.value();
    const auto hp = policy.encode(tape, shuffled).embeddings.value();
    for (int i = 0; i < n; ++i)
      worst = std::max(worst,
                       (hp.row(i) - h.row(perm[i])).cwiseAbs().maxCoeff());
  }
  report("encoder permutation equivariance", worst < 1e-5,
         "max deviation " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Criterion: desk-scale learning. Tiny preset, TSP N=10, 2,000 steps, fixed
// seed. (a) mean greedy multi-start gap to the exhaustive optimum <= 5% on
// 100 held-out instances; (b) final validation cost at least 20% below the
// untrained policy's.
void criterion_desk_learning() {
  const auto t0 = std::chrono::steady_clock::now();

  EnsemblePolicy<float> policy(ProblemKind::kTsp, PolicyConfig::preset("tiny"),
                               424242);
  TrainConfig config;
  config.kind = ProblemKind::kTsp;
  config.preset = "tiny";
  config.scale = FixedScale{10};
  config.steps = 2000;
  config.bs_init = 8;
  config.max_batch = 8;
  config.max_starts = 10;
  config.xi = 8;
  config.adam.learning_rate = 1e-3;
  config.seed = 20240607;
  config.validation = {{10, 0.0, 64}};
  const auto result = train(policy, config, TrainMode::kSmallScale);

  // (a) held-out gap against the exhaustive optimum
  Rng holdout_rng(777);
  GenConfig gen;
  gen.scale_sampler = FixedScale{10};
  SolveOptions opts;
  opts.max_starts = 10;
  opts.normalize = NormalizePolicy::kNever;
  double gap_sum = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Instance inst = gen_instance(gen, ProblemKind::kTsp, holdout_rng);
    const auto sol = solve_instance(policy, inst, opts);
    const double optimum = oracle::brute_force_tsp(inst);
    gap_sum += (sol.solution.objective - optimum) / optimum;
  }
  const double mean_gap = gap_sum / 100.0;
  report("desk-scale learning (gap)", mean_gap <= 0.05,
         "mean gap " + fmt(mean_gap * 100) + "% over 100 held-out, " +
             fmt(elapsed_s(t0)) + " s total");

  // (b) trained validation cost at least 20% below the untrained one.
  // The untrained ensemble already plays a multi-start nearest-neighbor
  // heuristic (distance bias plus remote penalty), so its validation cost
  // sits a few percent above the optimum; 0.8x that is below the optimal
  // cost itself and no trained policy can reach it. Kept as stated and
  // reported with the exact bound so the failure is self-explanatory.
  const double drop =
      1.0 - result.final_validation_mean / result.first_validation_mean;
  double val_opt_mean = 0.0;
  {
    // Rebuild the trainer's validation set (same stream derivation) and
    // price it exactly.
    Rng master(config.seed);
    master.fork(1);
    master.fork(2);
    Rng validation_rng = master.fork(3);
    const auto val_set = make_validation_set(
        ProblemKind::kTsp, config.validation[0], validation_rng.fork(10));
    for (const auto& inst : val_set)
      val_opt_mean += oracle::brute_force_tsp(inst);
    val_opt_mean /= static_cast<double>(val_set.size());
  }
  report("desk-scale learning (improvement)", drop >= 0.20,
         "drop " + fmt(drop * 100) + "% (untrained " +
             fmt(result.first_validation_mean) + " -> trained " +
             fmt(result.final_validation_mean) + "); 0.8*untrained = " +
             fmt(0.8 * result.first_validation_mean) +
             " < optimal validation mean " + fmt(val_opt_mean) +
             ", so the 20% bar is unreachable for any policy");
}

// ---------------------------------------------------------------------------
// Criterion: with the local policy frozen at zero output, greedy trajectories
// equal the pure global policy's on 100 instances.
void criterion_neutrality() {
  Rng rng(999);
  PolicyConfig zeroed_config = PolicyConfig::preset("tiny");
  zeroed_config.local_zero = true;
  PolicyConfig global_config = PolicyConfig::preset("tiny");
  global_config.use_local = false;
  EnsemblePolicy<float> zeroed(ProblemKind::kCvrp, zeroed_config, 1212);
  EnsemblePolicy<float> global_only(ProblemKind::kCvrp, global_config, 1212);

  int identical = 0;
  const int total = 100;
  for (int trial = 0; trial < total; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(8, 40));
    const Instance inst = random_instance(ProblemKind::kCvrp, n, rng);
    const auto starts = default_start_nodes(inst, 4);
    const auto a =
        run_rollouts(zeroed, inst, inst, starts, SelectMode::kGreedy, nullptr);
    const auto b = run_rollouts(global_only, inst, inst, starts,
                                SelectMode::kGreedy, nullptr);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].actions == b[i].actions;
    if (same) ++identical;
  }
  report("ensemble neutrality", identical == total,
         std::to_string(identical) + "/" + std::to_string(total) +
             " instances with identical greedy trajectories");
}

// ---------------------------------------------------------------------------
// Criterion: one-sided signed-rank p equals exhaustive sign enumeration for
// every sample with n <= 10 pairs.
void criterion_wilcoxon() {
  Rng rng(1111);
  int mismatches = 0;
  const int total = 400;
  double worst = 0.0;
  for (int trial = 0; trial < total; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    std::vector<double> a(n), b(n);
    const bool coarse = trial % 2 == 0;
    for (int i = 0; i < n; ++i) {
      if (coarse) {
        a[i] = static_cast<double>(rng.uniform_int(0, 4));
        b[i] = static_cast<double>(rng.uniform_int(0, 4));
      } else {
        a[i] = rng.uniform(0.0, 1.0);
        b[i] = rng.uniform(0.0, 1.0);
      }
    }
    const auto result = wilcoxon_one_sided(a, b);
    const double reference = oracle::wilcoxon_enumeration(a, b);
    worst = std::max(worst, std::abs(result.p_value - reference));
    if (std::abs(result.p_value - reference) >= 1e-12) ++mismatches;
  }
  report("wilcoxon exactness", mismatches == 0,
         std::to_string(total - mismatches) + "/" + std::to_string(total) +
             " samples exact, worst |dp| " + fmt(worst));
}

// ---------------------------------------------------------------------------
// Criterion: write-parse identity on the fixture corpus, and the hand-checked
// rounded-distance fixture.
void criterion_parser() {
  bool ok = true;
  std::string detail;

  const std::vector<std::string> fixtures = {"fixtures/grid9.tsp",
                                             "fixtures/clustered13.vrp",
                                             "fixtures/shifted_depot.vrp"};
  int round_trips = 0;
  for (const auto& path : fixtures) {
    std::ifstream in(path);
    if (!in) {
      ok = false;
      detail = "missing fixture " + path;
      break;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const auto first = parse_vrplib(buffer.str());
    const auto written = write_vrplib(first.instance, first.meta);
    const auto second = parse_vrplib(written);
    if (!(first.instance == second.instance) ||
        written != write_vrplib(second.instance, second.meta)) {
      ok = false;
      detail = "round trip failed for " + path;
      break;
    }
    ++round_trips;
  }

  if (ok) {
    const char* tiny = "NAME : t\nTYPE : TSP\nDIMENSION : 3\n"
                       "EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n"
                       "1 0 0\n2 3 0\n3 0 4\nEOF\n";
    const auto parsed = parse_vrplib(tiny);
    const auto& inst = parsed.instance;
    ok = inst.distance(0, 1) == 3.0 && inst.distance(2, 0) == 4.0 &&
         inst.distance(1, 2) == 5.0 && tour_length(inst, {0, 1, 2}) == 12.0;
    detail = std::to_string(round_trips) +
             " fixtures round-tripped; rounded edges 3/4/5, tour 12";
    if (!ok) detail = "rounded-distance fixture mismatch";
  }
  report("parser round-trip", ok, detail);
}

// ---------------------------------------------------------------------------
// Criterion: identical seed and config give bit-identical checkpoints.
void criterion_determinism() {
  const auto t0 = std::chrono::steady_clock::now();
  auto run = [](const std::string& path) {
    EnsemblePolicy<float> policy(ProblemKind::kTsp,
                                 PolicyConfig::preset("tiny"), 31415);
    TrainConfig config;
    config.kind = ProblemKind::kTsp;
    config.preset = "tiny";
    config.scale = FixedScale{8};
    config.steps = 60;
    config.bs_init = 4;
    config.max_batch = 4;
    config.max_starts = 8;
    config.xi = 6;
    config.adam.learning_rate = 1e-3;
    config.seed = 271828;
    config.validation = {{8, 0.0, 8}};
    config.checkpoint_path = path;
    train(policy, config, TrainMode::kSmallScale);
  };
  run("acceptance_det_a.ckpt");
  run("acceptance_det_b.ckpt");

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const std::string a = slurp("acceptance_det_a.ckpt");
  const std::string b = slurp("acceptance_det_b.ckpt");
  std::remove("acceptance_det_a.ckpt");
  std::remove("acceptance_det_b.ckpt");
  report("determinism", !a.empty() && a == b,
         std::to_string(a.size()) + "-byte checkpoints identical, " +
             fmt(elapsed_s(t0)) + " s");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_gradients();
  criterion_feasibility();
  criterion_rs_oracle();
  criterion_local_transfer();
  criterion_equivariance();
  criterion_desk_learning();
  criterion_neutrality();
  criterion_wilcoxon();
  criterion_parser();
  criterion_determinism();
  std::printf("----\n%s: %d criterion(s) failed, total %.1f s\n",
              failures == 0 ? "ALL PASS" : "FAILURES", failures,
              elapsed_s(t0));
  return failures == 0 ? 0 : 1;
}
