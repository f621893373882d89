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

#ifndef GAEX_METRICS_HPP_
#define GAEX_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gaex/types.hpp"

namespace gaex {

// One row per episode. Loss and discriminator columns carry the most recent
// value seen by the end of the episode, NaN before the first update.
struct MetricsRecord {
  std::string run;
  std::uint64_t seed = 0;
  int episode = 0;          // 1-based
  std::int64_t steps = 0;   // cumulative environment steps
  Real ext_return = 0;
  Real int_return = 0;
  int max_state = 0;        // chain only; 0 elsewhere
  Real d_real = 0;
  Real d_fake = 0;
  Real d_loss = 0;
  Real g_loss = 0;
  Real td_loss = 0;
  Real epsilon = 0;
};

// Field-wise equality where NaN equals NaN.
bool same_record(const MetricsRecord& a, const MetricsRecord& b);

inline constexpr const char* kMetricsHeader =
    "run,seed,episode,steps,ext_return,int_return,max_state,d_real,d_fake,d_loss,g_loss,td_loss,epsilon";

void write_metrics_csv(const std::vector<MetricsRecord>& series, const std::filesystem::path& path);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

}  // namespace gaex

#endif  // GAEX_METRICS_HPP_
