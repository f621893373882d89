// Copyright 2026 The GAEX Toolkit Authors. All rights reserved.
//
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

// Binary parameter snapshots. Layout (little-endian host order):
//   "GAEXSNP1" | u64 config hash | u32 network count |
//   per network: u32 name length, name bytes, u8 activation, f64 leaky slope,
//                u8 head, u8 output, u32 layer count,
//                per layer: u64 rows, u64 cols, weights (row-major f64),
//                           u64 bias length, bias (f64)

#ifndef GAEX_SNAPSHOT_HPP_
#define GAEX_SNAPSHOT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gaex/nn.hpp"
#include "gaex/types.hpp"

namespace gaex {

struct Snapshot {
  std::uint64_t config_hash = 0;
  std::vector<std::pair<std::string, NetworkParams<Real>>> networks;
};

void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace gaex

#endif  // GAEX_SNAPSHOT_HPP_
