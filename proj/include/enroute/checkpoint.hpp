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

#ifndef ENROUTE_CHECKPOINT_HPP_
#define ENROUTE_CHECKPOINT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "enroute/error.hpp"
#include "enroute/nn.hpp"

namespace enroute {

// Versioned binary container: magic, scalar width tag, key/value metadata
// (config echo), rng state text, then named parameter arrays with shapes.
// Values are raw column-major scalars, little endian.
struct CheckpointData {
  std::uint32_t version = 1;
  int scalar_width = 4;
  std::map<std::string, std::string> meta;
  std::string rng_state;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> params;
};

namespace checkpoint_detail {

constexpr char kMagic[8] = {'E', 'N', 'R', 'T', 'C', 'K', 'P', '1'};

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  os.write(buf, 4);
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  os.write(buf, 8);
}

inline void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint32_t get_u32(std::istream& is) {
  char buf[4];
  is.read(buf, 4);
  std::uint32_t v;
  std::memcpy(&v, buf, 4);
  return v;
}

inline std::uint64_t get_u64(std::istream& is) {
  char buf[8];
  is.read(buf, 8);
  std::uint64_t v;
  std::memcpy(&v, buf, 8);
  return v;
}

inline std::string get_string(std::istream& is) {
  const std::uint32_t len = get_u32(is);
  std::string s(len, '\0');
  is.read(s.data(), len);
  return s;
}

}  // namespace checkpoint_detail

template <class Scalar>
void write_checkpoint(const std::string& path,
                      const nn::ParamStore<Scalar>& store,
                      const std::map<std::string, std::string>& meta,
                      const std::string& rng_state) {
  namespace d = checkpoint_detail;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write checkpoint: " + path);
  os.write(d::kMagic, 8);
  d::put_u32(os, 1);
  d::put_u32(os, static_cast<std::uint32_t>(sizeof(Scalar)));
  d::put_u32(os, static_cast<std::uint32_t>(meta.size()));
  for (const auto& [k, v] : meta) {
    d::put_string(os, k);
    d::put_string(os, v);
  }
  d::put_string(os, rng_state);
  d::put_u32(os, static_cast<std::uint32_t>(store.size()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    const auto& p = store.at(i);
    d::put_string(os, p.name);
    d::put_u64(os, static_cast<std::uint64_t>(p.value.rows()));
    d::put_u64(os, static_cast<std::uint64_t>(p.value.cols()));
    os.write(reinterpret_cast<const char*>(p.value.data()),
             static_cast<std::streamsize>(p.value.size() * sizeof(Scalar)));
  }
  if (!os) throw Error("checkpoint write failed: " + path);
}

CheckpointData read_checkpoint(const std::string& path);

// Copies arrays into an existing store by name; shapes must match exactly.
template <class Scalar>
void assign_params(nn::ParamStore<Scalar>& store, const CheckpointData& data) {
  std::size_t assigned = 0;
  for (const auto& [name, values] : data.params) {
    nn::Parameter<Scalar>* p = store.find(name);
    if (!p) throw Error("checkpoint parameter not in model: " + name);
    if (p->value.rows() != values.rows() || p->value.cols() != values.cols())
      throw Error("checkpoint shape mismatch for " + name);
    p->value = values.template cast<Scalar>();
    ++assigned;
  }
  if (assigned != store.size())
    throw Error("checkpoint is missing parameters for this model");
}

}  // namespace enroute

#endif  // ENROUTE_CHECKPOINT_HPP_
