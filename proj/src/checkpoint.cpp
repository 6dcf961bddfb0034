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

#include "enroute/checkpoint.hpp"

namespace enroute {

CheckpointData read_checkpoint(const std::string& path) {
  namespace d = checkpoint_detail;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint: " + path);

  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, d::kMagic, 8) != 0)
    throw Error("not a checkpoint file: " + path);

  CheckpointData data;
  data.version = d::get_u32(is);
  if (data.version != 1)
    throw Error("unsupported checkpoint version " +
                std::to_string(data.version));
  data.scalar_width = static_cast<int>(d::get_u32(is));
  if (data.scalar_width != 4 && data.scalar_width != 8)
    throw Error("corrupt checkpoint: bad scalar width");

  const std::uint32_t meta_count = d::get_u32(is);
  for (std::uint32_t i = 0; i < meta_count; ++i) {
    const std::string key = d::get_string(is);
    data.meta[key] = d::get_string(is);
  }
  data.rng_state = d::get_string(is);

  const std::uint32_t param_count = d::get_u32(is);
  for (std::uint32_t i = 0; i < param_count; ++i) {
    const std::string name = d::get_string(is);
    const auto rows = static_cast<Eigen::Index>(d::get_u64(is));
    const auto cols = static_cast<Eigen::Index>(d::get_u64(is));
    Eigen::MatrixXd values(rows, cols);
    if (data.scalar_width == 8) {
      is.read(reinterpret_cast<char*>(values.data()),
              static_cast<std::streamsize>(values.size() * 8));
    } else {
      Eigen::MatrixXf tmp(rows, cols);
      is.read(reinterpret_cast<char*>(tmp.data()),
              static_cast<std::streamsize>(tmp.size() * 4));
      values = tmp.cast<double>();
    }
    data.params.emplace_back(name, std::move(values));
  }
  if (!is) throw Error("truncated checkpoint: " + path);
  return data;
}

}  // namespace enroute
