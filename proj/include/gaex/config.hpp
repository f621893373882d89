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

// Declarative experiment description. Configs are JSON documents; every
// field not given falls back to the defaults of the selected environment.

#ifndef GAEX_CONFIG_HPP_
#define GAEX_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gaex/agent.hpp"
#include "gaex/gan.hpp"

namespace gaex {

enum class EnvKind { kChain, kPixelGrid };
enum class Mode { kDqn, kDqnD, kGaex, kCount };
enum class ScheduleUnit { kSteps, kEpisodes };
// What advances epsilon: environment steps taken once replay has warmed up,
// or completed DQN updates.
enum class EpsilonClock { kEnvSteps, kUpdates };

struct AgentSettings {
  std::vector<Index> hidden{64, 128, 256, 128};
  bool dueling = true;
  bool double_q = true;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  Real learning_rate = 0.005;
  Real gamma = 0.99;
  int n_step = 10;
  bool random_n_step = false;
  int batch_size = 300;
  int replay_capacity = 10000;
  int replay_start = 10000;
  int target_sync = 50;
  std::optional<std::pair<Real, Real>> gradient_clip;
  bool clip_extrinsic = false;
  Real epsilon_initial = 1.0;
  Real epsilon_final = 0.0;
  Real epsilon_decay = 0.0005;
  std::optional<Real> epsilon_stage_floor;
  Real epsilon_stage_decay = 0;
  EpsilonClock epsilon_clock = EpsilonClock::kEnvSteps;
  ScheduleUnit train_unit = ScheduleUnit::kEpisodes;
  int k1 = 2;  // DQN update every k1 train_units

  friend bool operator==(const AgentSettings&, const AgentSettings&) = default;
};

struct GanSettings {
  std::vector<Index> generator_hidden{50, 50};
  std::vector<Index> discriminator_hidden{50, 50};
  int noise_dim = 0;  // 0: same as the feature dimension
  Real leaky_slope = 0.01;
  Real generator_lr = 0.001;
  Real discriminator_lr = 0.001;
  int k2 = 1;  // GAN update every k2 DQN updates
  int generator_steps = 1;
  int discriminator_steps = 1;

  friend bool operator==(const GanSettings&, const GanSettings&) = default;
};

struct RunConfig {
  std::string name = "run";
  EnvKind env = EnvKind::kChain;
  int chain_length = 10;
  Mode mode = Mode::kGaex;
  Real beta = 1.0;
  int episodes = 3000;
  std::vector<std::uint64_t> seeds{0};
  AgentSettings agent;
  GanSettings gan;
  std::string output_dir;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Defaults for an environment: chain MDP uses the small-scale column of the
// published hyperparameters, the pixel grid the Atari-style column.
RunConfig default_config(EnvKind env);

void validate(const RunConfig& config);

RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

// FNV-1a over the canonical JSON form, excluding output_dir.
std::uint64_t config_hash(const RunConfig& config);

std::string to_string(Mode mode);
std::string to_string(EnvKind env);
Mode parse_mode(const std::string& text);

QLearnerConfig learner_config(const RunConfig& config);
EpsilonSchedule epsilon_schedule(const RunConfig& config);

}  // namespace gaex

#endif  // GAEX_CONFIG_HPP_
