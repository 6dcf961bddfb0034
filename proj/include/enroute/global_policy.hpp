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

#ifndef ENROUTE_GLOBAL_POLICY_HPP_
#define ENROUTE_GLOBAL_POLICY_HPP_

#include <string>
#include <vector>

#include "enroute/autodiff.hpp"
#include "enroute/env.hpp"
#include "enroute/nn.hpp"

namespace enroute {

struct GlobalPolicyConfig {
  int embed_dim = 128;
  int layers = 6;
  int heads = 8;
  int ff_dim = 512;
  bool use_glimpse = true;
};

// Whole-instance scorer: attention encoder over all nodes, query built from
// the decoding state, single-head compatibility against the node embeddings.
template <class Scalar>
class GlobalPolicy {
 public:
  using Tape = nn::Tape<Scalar>;
  using Var = nn::Var<Scalar>;

  GlobalPolicy(nn::ParamStore<Scalar>& store, ProblemKind kind,
               const GlobalPolicyConfig& config, Rng& rng)
      : kind_(kind), config_(config) {
    const int d = config.embed_dim;
    const int customer_in = kind == ProblemKind::kCvrp ? 3 : 2;
    init_customer_ = nn::Linear<Scalar>(store, "global/init_customer",
                                        customer_in, d, rng);
    if (kind == ProblemKind::kCvrp)
      init_depot_ = nn::Linear<Scalar>(store, "global/init_depot", 2, d, rng);
    for (int l = 0; l < config.layers; ++l) {
      const std::string prefix = "global/enc" + std::to_string(l);
      EncoderLayer layer;
      layer.attention = nn::MultiHeadAttention<Scalar>(
          store, prefix + "/mha", d, config.heads, rng);
      layer.norm1_gamma = &store.create(prefix + "/norm1/gamma", 1, d);
      layer.norm1_gamma->value.setOnes();
      layer.norm1_beta = &store.create(prefix + "/norm1/beta", 1, d);
      layer.ff1 = nn::Linear<Scalar>(store, prefix + "/ff1", d, config.ff_dim,
                                     rng);
      layer.ff2 = nn::Linear<Scalar>(store, prefix + "/ff2", config.ff_dim, d,
                                     rng);
      layer.norm2_gamma = &store.create(prefix + "/norm2/gamma", 1, d);
      layer.norm2_gamma->value.setOnes();
      layer.norm2_beta = &store.create(prefix + "/norm2/beta", 1, d);
      layers_.push_back(layer);
    }
    const int ctx_dim = kind == ProblemKind::kCvrp ? d + 1 : 2 * d;
    query_proj_ = nn::Linear<Scalar>(store, "global/query", ctx_dim, d, rng);
    glimpse_ = nn::MultiHeadAttention<Scalar>(store, "global/glimpse", d,
                                              config.heads, rng);
  }

  const GlobalPolicyConfig& config() const { return config_; }

  struct Encodings {
    Var embeddings;  // nodes x d
    Var glimpse_keys;
    Var glimpse_values;
  };

  // Expects coordinates inside the unit square (the training domain).
  Encodings encode(Tape& tape, const Instance& inst) const {
    return encode_features(tape, tape.constant(node_features(inst)),
                           inst.customer_count());
  }

  // Same, but from an explicit feature leaf so callers can differentiate
  // with respect to the inputs.
  Encodings encode_features(Tape& tape, Var features,
                            int customer_count) const {
    Var h;
    if (kind_ == ProblemKind::kCvrp) {
      Var depot = init_depot_.forward(
          tape, ad::slice_cols(ad::gather_rows(features, {0}), 0, 2));
      std::vector<int> customer_rows(customer_count);
      for (int i = 0; i < customer_count; ++i) customer_rows[i] = i + 1;
      Var customers = init_customer_.forward(
          tape, ad::gather_rows(features, customer_rows));
      h = ad::concat_rows<Scalar>({depot, customers});
    } else {
      h = init_customer_.forward(tape, features);
    }
    for (const auto& layer : layers_) {
      Var attended = layer.attention.forward(tape, h, h);
      h = ad::feature_norm(ad::add(h, attended),
                           nn::param_leaf(tape, *layer.norm1_gamma),
                           nn::param_leaf(tape, *layer.norm1_beta));
      Var ff = layer.ff2.forward(tape, ad::vrelu(layer.ff1.forward(tape, h)));
      h = ad::feature_norm(ad::add(h, ff),
                           nn::param_leaf(tape, *layer.norm2_gamma),
                           nn::param_leaf(tape, *layer.norm2_beta));
    }
    Encodings enc;
    enc.embeddings = h;
    if (config_.use_glimpse) {
      enc.glimpse_keys = glimpse_.proj_k.forward(tape, h);
      enc.glimpse_values = glimpse_.proj_v.forward(tape, h);
    }
    return enc;
  }

  // The raw context rows (values only): CVRP is [h_current, load/Q], TSP is
  // [h_current, h_first].
  ad::MatX<Scalar> context_values(
      const Encodings& enc,
      const std::vector<const ConstructionState*>& states) const {
    const auto& h = enc.embeddings.value();
    const Eigen::Index d = h.cols();
    const Eigen::Index width = kind_ == ProblemKind::kCvrp ? d + 1 : 2 * d;
    ad::MatX<Scalar> ctx(static_cast<Eigen::Index>(states.size()), width);
    for (std::size_t r = 0; r < states.size(); ++r) {
      const auto* st = states[r];
      ctx.row(r).head(d) = h.row(st->current);
      if (kind_ == ProblemKind::kCvrp)
        ctx(r, d) = static_cast<Scalar>(st->remaining_load /
                                        st->instance->capacity);
      else
        ctx.row(r).tail(d) = h.row(st->first);
    }
    return ctx;
  }

  // Projects the decoder context into the query space.
  Var build_query(Tape& tape, const Encodings& enc,
                  const std::vector<const ConstructionState*>& states) const {
    std::vector<int> currents, firsts;
    currents.reserve(states.size());
    for (const auto* st : states) {
      currents.push_back(st->current);
      firsts.push_back(st->first);
    }
    Var current_rows = ad::gather_rows(enc.embeddings, currents);
    Var context;
    if (kind_ == ProblemKind::kCvrp) {
      ad::MatX<Scalar> load(static_cast<Eigen::Index>(states.size()), 1);
      for (std::size_t r = 0; r < states.size(); ++r)
        load(static_cast<Eigen::Index>(r), 0) = static_cast<Scalar>(
            states[r]->remaining_load / states[r]->instance->capacity);
      context = ad::concat_cols<Scalar>({current_rows, tape.constant(load)});
    } else {
      Var first_rows = ad::gather_rows(enc.embeddings, firsts);
      context = ad::concat_cols<Scalar>({current_rows, first_rows});
    }
    return query_proj_.forward(tape, context);
  }

  // One glimpse attention over the unmasked nodes refines the query, then a
  // single-head compatibility against the embeddings yields the raw scores
  // (unclipped, unmasked).
  Var scores(Tape& tape, const Encodings& enc, Var query,
             const ad::BoolMat& valid) const {
    Var refined = query;
    if (config_.use_glimpse) {
      Var q = glimpse_.proj_q.forward(tape, query);
      refined = glimpse_.attend(tape, q, enc.glimpse_keys, enc.glimpse_values,
                                &valid);
    }
    return compatibility(refined, enc.embeddings);
  }

  // u = q K^T / sqrt(d) with the node embeddings as keys.
  static Var compatibility(Var query, Var keys) {
    const Scalar inv_sqrt_d =
        Scalar(1) / std::sqrt(static_cast<Scalar>(keys.cols()));
    return ad::scale(ad::matmul_nt(query, keys), inv_sqrt_d);
  }

  // The raw per-node input features (before any projection).
  ad::MatX<Scalar> node_features(const Instance& inst) const {
    const int n = inst.node_count();
    const int width = kind_ == ProblemKind::kCvrp ? 3 : 2;
    ad::MatX<Scalar> f(n, width);
    for (int i = 0; i < n; ++i) {
      f(i, 0) = static_cast<Scalar>(inst.coords(i, 0));
      f(i, 1) = static_cast<Scalar>(inst.coords(i, 1));
      if (width == 3)
        f(i, 2) = static_cast<Scalar>(inst.demands(i) / inst.capacity);
    }
    return f;
  }

 private:
  struct EncoderLayer {
    nn::MultiHeadAttention<Scalar> attention;
    nn::Parameter<Scalar>* norm1_gamma = nullptr;
    nn::Parameter<Scalar>* norm1_beta = nullptr;
    nn::Linear<Scalar> ff1, ff2;
    nn::Parameter<Scalar>* norm2_gamma = nullptr;
    nn::Parameter<Scalar>* norm2_beta = nullptr;
  };

  ProblemKind kind_;
  GlobalPolicyConfig config_;
  nn::Linear<Scalar> init_customer_, init_depot_;
  std::vector<EncoderLayer> layers_;
  nn::Linear<Scalar> query_proj_;
  nn::MultiHeadAttention<Scalar> glimpse_;
};

}  // namespace enroute

#endif  // ENROUTE_GLOBAL_POLICY_HPP_
