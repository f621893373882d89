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

// The exploration training loop, its environment adapters, and the ablation
// driver that runs several config variants over shared seeds.

#ifndef GAEX_TRAINING_HPP_
#define GAEX_TRAINING_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaex/agent.hpp"
#include "gaex/config.hpp"
#include "gaex/envs.hpp"
#include "gaex/gan.hpp"
#include "gaex/metrics.hpp"

namespace gaex {

// What the learner sees. Observations are already abstracted features.
class Environment {
 public:
  struct Step {
    Vector observation;
    Real reward = 0;
    bool done = false;
  };

  virtual ~Environment() = default;
  virtual Vector reset(std::uint64_t seed) = 0;
  virtual Step step(int action) = 0;
  virtual int num_actions() const = 0;
  virtual Index observation_dim() const = 0;

  // Finite environments expose every observation as the rows of a table
  // (row id <-> observation) so network outputs can be cached per state.
  virtual const Batch* observation_table() const { return nullptr; }
  // True when observation_table() is the identity matrix.
  virtual bool one_hot() const { return false; }
  virtual int observation_id(const Vector& /*observation*/) const { return -1; }
  virtual int current_id() const { return -1; }
  // Chain: current state index. Zero elsewhere.
  virtual int progress() const { return 0; }
};

class ChainEnvironment final : public Environment {
 public:
  explicit ChainEnvironment(int length);
  Vector reset(std::uint64_t seed) override;
  Step step(int action) override;
  int num_actions() const override { return ChainMdp::kNumActions; }
  Index observation_dim() const override { return chain_.length(); }
  const Batch* observation_table() const override { return &table_; }
  bool one_hot() const override { return true; }
  int observation_id(const Vector& observation) const override { return ChainMdp::decode(observation) - 1; }
  int current_id() const override { return state_.index - 1; }
  int progress() const override { return state_.index; }

 private:
  ChainMdp chain_;
  ChainState state_;
  Batch table_;
};

class PixelGridEnvironment final : public Environment {
 public:
  Vector reset(std::uint64_t seed) override;
  Step step(int action) override;
  int num_actions() const override { return PixelGrid::kNumActions; }
  Index observation_dim() const override;

 private:
  PixelGrid grid_;
};

std::unique_ptr<Environment> make_environment(const RunConfig& config);

struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<MetricsRecord> metrics;
  NetworkParams<Real> q_network;
  std::optional<GanPair> gan;
  std::int64_t env_steps = 0;
  std::int64_t dqn_updates = 0;
  std::int64_t gan_updates = 0;
};

struct RunResult {
  RunConfig config;
  std::vector<SeedRun> seeds;

  std::vector<MetricsRecord> metrics() const;
};

using EpisodeCallback = std::function<void(const MetricsRecord&)>;

struct TrainingOptions {
  int workers = 1;            // parallel (variant, seed) jobs
  EpisodeCallback on_episode;  // may be called from worker threads
};

// One seed of the full loop. Deterministic in (config, seed).
SeedRun run_seed(const RunConfig& config, std::uint64_t seed, const EpisodeCallback& on_episode = {});

// Every seed of `config`; writes a parameter snapshot per seed when
// config.output_dir is set.
RunResult run_training(const RunConfig& config, const TrainingOptions& options = {});

struct Variant {
  std::string name;
  nlohmann::json overrides;  // merge-patch applied to the base config
};

struct AblationResult {
  std::vector<RunResult> variants;

  std::vector<MetricsRecord> metrics() const;
  const RunResult& operator[](const std::string& name) const;
};

// Resolves each variant against `base` without running anything.
std::vector<RunConfig> resolve_variants(const RunConfig& base, const std::vector<Variant>& variants);

AblationResult run_ablation(const RunConfig& base, const std::vector<Variant>& variants,
                            const TrainingOptions& options = {});

// Grid file: {"variants": [{"name": ..., "overrides": {...}}, ...]}
std::vector<Variant> load_grid(const std::filesystem::path& path);

}  // namespace gaex

#endif  // GAEX_TRAINING_HPP_
