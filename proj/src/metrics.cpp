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

#include "gaex/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gaex/errors.hpp"

namespace gaex {
namespace {

bool same_real(Real a, Real b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string format_real(Real v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Real parse_real(const std::string& field) {
  if (field == "nan") return std::nan("");
  char* end = nullptr;
  const Real v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') throw Error("metrics CSV: bad number '" + field + "'");
  return v;
}

}  // namespace

bool same_record(const MetricsRecord& a, const MetricsRecord& b) {
  return a.run == b.run && a.seed == b.seed && a.episode == b.episode && a.steps == b.steps &&
         same_real(a.ext_return, b.ext_return) && same_real(a.int_return, b.int_return) &&
         a.max_state == b.max_state && same_real(a.d_real, b.d_real) && same_real(a.d_fake, b.d_fake) &&
         same_real(a.d_loss, b.d_loss) && same_real(a.g_loss, b.g_loss) && same_real(a.td_loss, b.td_loss) &&
         same_real(a.epsilon, b.epsilon);
}

void write_metrics_csv(const std::vector<MetricsRecord>& series, const std::filesystem::path& path) {
  if (series.empty()) throw ContractError("refusing to write an empty metrics series");
  std::ofstream out(path);
  if (!out) throw Error("cannot write metrics to " + path.string());
  out << kMetricsHeader << '\n';
  for (const auto& r : series) {
    if (r.run.find_first_of(",\n\"") != std::string::npos) throw ContractError("run id may not contain , \" or newline");
    out << r.run << ',' << r.seed << ',' << r.episode << ',' << r.steps << ',' << format_real(r.ext_return) << ','
        << format_real(r.int_return) << ',' << r.max_state << ',' << format_real(r.d_real) << ','
        << format_real(r.d_fake) << ',' << format_real(r.d_loss) << ',' << format_real(r.g_loss) << ','
        << format_real(r.td_loss) << ',' << format_real(r.epsilon) << '\n';
  }
  if (!out) throw Error("failed writing metrics to " + path.string());
}

std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open metrics " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw Error("metrics CSV header mismatch in " + path.string());
  std::vector<MetricsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 13) throw Error("metrics CSV row has " + std::to_string(f.size()) + " fields");
    MetricsRecord r;
    r.run = f[0];
    r.seed = std::stoull(f[1]);
    r.episode = std::stoi(f[2]);
    r.steps = std::stoll(f[3]);
    r.ext_return = parse_real(f[4]);
    r.int_return = parse_real(f[5]);
    r.max_state = std::stoi(f[6]);
    r.d_real = parse_real(f[7]);
    r.d_fake = parse_real(f[8]);
    r.d_loss = parse_real(f[9]);
    r.g_loss = parse_real(f[10]);
    r.td_loss = parse_real(f[11]);
    r.epsilon = parse_real(f[12]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gaex
