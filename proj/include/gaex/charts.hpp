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

// SVG line charts of per-episode metrics: one curve per run, the mean over
// seeds drawn as a line over a shaded min/max band.

#ifndef GAEX_CHARTS_HPP_
#define GAEX_CHARTS_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "gaex/metrics.hpp"

namespace gaex {

struct ChartSeries {
  std::string run;
  std::vector<Real> x;  // episode
  std::vector<Real> mean;
  std::vector<Real> lo;
  std::vector<Real> hi;
};

// Aggregates one metric column across seeds and averages it into at most
// `max_points` consecutive episode buckets.
std::vector<ChartSeries> aggregate_metric(const std::vector<MetricsRecord>& series, const std::string& metric,
                                          std::size_t max_points = 400);

std::string render_svg(const std::vector<ChartSeries>& curves, const std::string& title, const std::string& y_label);

// Writes <dir>/<metric>.svg for the episodic metrics. Returns the paths.
std::vector<std::filesystem::path> emit_charts(const std::vector<MetricsRecord>& series,
                                               const std::filesystem::path& dir);

}  // namespace gaex

#endif  // GAEX_CHARTS_HPP_
