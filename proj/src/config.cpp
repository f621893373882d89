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

#include "gaex/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gaex/errors.hpp"

namespace gaex {

using nlohmann::json;

namespace {

const char* unit_name(ScheduleUnit u) { return u == ScheduleUnit::kSteps ? "steps" : "episodes"; }
const char* clock_name(EpsilonClock c) { return c == EpsilonClock::kEnvSteps ? "env_steps" : "updates"; }
const char* optimizer_name(OptimizerKind k) { return k == OptimizerKind::kAdam ? "adam" : "rmsprop"; }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "config must be an object" : where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config field '" + (where.empty() ? std::string(key) : where + "." + key) +
                      "' has the wrong type: " + e.what());
  }
}

template <typename Enum, typename Names>
void read_enum(const json& obj, const char* key, Enum& out, const Names& names, const std::string& where) {
  if (!obj.contains(key)) return;
  const std::string field = where.empty() ? std::string(key) : where + "." + key;
  if (!obj.at(key).is_string()) throw ConfigError("config field '" + field + "' must be a string");
  const std::string text = obj.at(key).get<std::string>();
  for (const auto& [name, value] : names) {
    if (text == name) {
      out = value;
      return;
    }
  }
  throw ConfigError("config field '" + field + "' has unknown value '" + text + "'");
}

const std::vector<std::pair<std::string, Mode>> kModes{
    {"dqn", Mode::kDqn}, {"dqn+d", Mode::kDqnD}, {"dqn-gaex", Mode::kGaex}, {"dqn+count", Mode::kCount}};
const std::vector<std::pair<std::string, EnvKind>> kEnvs{{"chain", EnvKind::kChain},
                                                         {"pixelgrid", EnvKind::kPixelGrid}};
const std::vector<std::pair<std::string, ScheduleUnit>> kUnits{{"steps", ScheduleUnit::kSteps},
                                                               {"episodes", ScheduleUnit::kEpisodes}};
const std::vector<std::pair<std::string, EpsilonClock>> kClocks{{"env_steps", EpsilonClock::kEnvSteps},
                                                                {"updates", EpsilonClock::kUpdates}};
const std::vector<std::pair<std::string, OptimizerKind>> kOptimizers{{"adam", OptimizerKind::kAdam},
                                                                     {"rmsprop", OptimizerKind::kRmsProp}};

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::string to_string(Mode mode) {
  for (const auto& [name, value] : kModes)
    if (value == mode) return name;
  return "?";
}

std::string to_string(EnvKind env) { return env == EnvKind::kChain ? "chain" : "pixelgrid"; }

Mode parse_mode(const std::string& text) {
  for (const auto& [name, value] : kModes)
    if (name == text) return value;
  throw ConfigError("unknown mode '" + text + "'");
}

RunConfig default_config(EnvKind env) {
  RunConfig c;
  c.env = env;
  if (env == EnvKind::kChain) return c;

  c.episodes = 100;
  c.beta = 10.0;
  auto& a = c.agent;
  a.optimizer = OptimizerKind::kRmsProp;
  a.learning_rate = 0.00025;
  a.random_n_step = true;
  a.batch_size = 32;
  a.replay_capacity = 1000000;
  a.replay_start = 50000;
  a.target_sync = 10000;
  a.gradient_clip = std::make_pair(-1.0, 1.0);
  a.clip_extrinsic = true;
  a.epsilon_initial = 1.0;
  a.epsilon_final = 0.01;
  a.epsilon_decay = 1e-6;
  a.epsilon_stage_floor = 0.1;
  a.epsilon_stage_decay = 5e-10;
  a.train_unit = ScheduleUnit::kSteps;
  a.k1 = 4;
  auto& g = c.gan;
  g.generator_hidden = {296, 148, 148};
  g.discriminator_hidden = {148, 74, 74};
  g.noise_dim = 128;
  g.leaky_slope = 0.2;
  g.generator_lr = 0.000005;
  g.discriminator_lr = 0.000005;
  g.k2 = 25;  // every 100 env steps with DQN updates every 4
  return c;
}

void validate(const RunConfig& c) {
  check(!c.name.empty(), "name must not be empty");
  check(c.env != EnvKind::kChain || c.chain_length >= 3, "chain_length must be at least 3");
  check(c.episodes >= 1, "episodes must be at least 1");
  check(!c.seeds.empty(), "seeds must not be empty");
  check(c.beta >= 0, "beta must be non-negative");
  const auto& a = c.agent;
  check(a.k1 >= 1, "agent.k1 must be at least 1");
  check(a.learning_rate > 0, "agent.learning_rate must be positive");
  check(a.gamma > 0 && a.gamma < 1, "agent.gamma must lie in (0, 1)");
  check(a.n_step >= 1, "agent.n_step must be at least 1");
  check(a.batch_size >= 1, "agent.batch_size must be at least 1");
  check(a.replay_capacity >= 1, "agent.replay_capacity must be at least 1");
  check(a.replay_start >= 1 && a.replay_start <= a.replay_capacity,
        "agent.replay_start must lie in [1, replay_capacity]");
  check(a.target_sync >= 1, "agent.target_sync must be at least 1");
  check(!a.gradient_clip || a.gradient_clip->first < a.gradient_clip->second, "agent.gradient_clip needs lo < hi");
  check(a.epsilon_initial >= 0 && a.epsilon_initial <= 1, "agent.epsilon_initial must lie in [0, 1]");
  check(a.epsilon_final >= 0 && a.epsilon_final <= a.epsilon_initial,
        "agent.epsilon_final must lie in [0, epsilon_initial]");
  check(a.epsilon_decay >= 0, "agent.epsilon_decay must be non-negative");
  check(a.epsilon_stage_decay >= 0, "agent.epsilon_stage_decay must be non-negative");
  for (Index h : a.hidden) check(h >= 1, "agent.hidden sizes must be positive");
  const auto& g = c.gan;
  check(g.k2 >= 1, "gan.k2 must be at least 1");
  check(g.noise_dim >= 0, "gan.noise_dim must be non-negative");
  check(g.generator_lr > 0 && g.discriminator_lr > 0, "gan learning rates must be positive");
  check(g.generator_steps >= 1 && g.discriminator_steps >= 1, "gan step counts must be at least 1");
  check(g.leaky_slope > 0 && g.leaky_slope < 1, "gan.leaky_slope must lie in (0, 1)");
  for (Index h : g.generator_hidden) check(h >= 1, "gan.generator_hidden sizes must be positive");
  for (Index h : g.discriminator_hidden) check(h >= 1, "gan.discriminator_hidden sizes must be positive");
}

RunConfig config_from_json(const json& doc) {
  reject_unknown(doc, {"name", "env", "chain_length", "mode", "beta", "episodes", "seeds", "agent", "gan", "output_dir"},
                 "");
  EnvKind env = EnvKind::kChain;
  read_enum(doc, "env", env, kEnvs, "");
  RunConfig c = default_config(env);
  read(doc, "name", c.name, "");
  read(doc, "chain_length", c.chain_length, "");
  read_enum(doc, "mode", c.mode, kModes, "");
  read(doc, "beta", c.beta, "");
  read(doc, "episodes", c.episodes, "");
  read(doc, "seeds", c.seeds, "");
  read(doc, "output_dir", c.output_dir, "");

  if (doc.contains("agent")) {
    const json& a = doc.at("agent");
    reject_unknown(a,
                   {"hidden", "dueling", "double_q", "optimizer", "learning_rate", "gamma", "n_step", "random_n_step",
                    "batch_size", "replay_capacity", "replay_start", "target_sync", "gradient_clip", "clip_extrinsic",
                    "epsilon_initial", "epsilon_final", "epsilon_decay", "epsilon_stage_floor", "epsilon_stage_decay",
                    "epsilon_clock", "train_unit", "k1"},
                   "agent");
    auto& s = c.agent;
    read(a, "hidden", s.hidden, "agent");
    read(a, "dueling", s.dueling, "agent");
    read(a, "double_q", s.double_q, "agent");
    read_enum(a, "optimizer", s.optimizer, kOptimizers, "agent");
    read(a, "learning_rate", s.learning_rate, "agent");
    read(a, "gamma", s.gamma, "agent");
    read(a, "n_step", s.n_step, "agent");
    read(a, "random_n_step", s.random_n_step, "agent");
    read(a, "batch_size", s.batch_size, "agent");
    read(a, "replay_capacity", s.replay_capacity, "agent");
    read(a, "replay_start", s.replay_start, "agent");
    read(a, "target_sync", s.target_sync, "agent");
    if (a.contains("gradient_clip")) {
      const json& clip = a.at("gradient_clip");
      if (clip.is_null()) {
        s.gradient_clip.reset();
      } else if (clip.is_array() && clip.size() == 2 && clip[0].is_number() && clip[1].is_number()) {
        s.gradient_clip = std::make_pair(clip[0].get<Real>(), clip[1].get<Real>());
      } else {
        throw ConfigError("config field 'agent.gradient_clip' must be null or [lo, hi]");
      }
    }
    read(a, "clip_extrinsic", s.clip_extrinsic, "agent");
    read(a, "epsilon_initial", s.epsilon_initial, "agent");
    read(a, "epsilon_final", s.epsilon_final, "agent");
    read(a, "epsilon_decay", s.epsilon_decay, "agent");
    if (a.contains("epsilon_stage_floor")) {
      if (a.at("epsilon_stage_floor").is_null()) {
        s.epsilon_stage_floor.reset();
      } else {
        Real v = 0;
        read(a, "epsilon_stage_floor", v, "agent");
        s.epsilon_stage_floor = v;
      }
    }
    read(a, "epsilon_stage_decay", s.epsilon_stage_decay, "agent");
    read_enum(a, "epsilon_clock", s.epsilon_clock, kClocks, "agent");
    read_enum(a, "train_unit", s.train_unit, kUnits, "agent");
    read(a, "k1", s.k1, "agent");
  }

  if (doc.contains("gan")) {
    const json& g = doc.at("gan");
    reject_unknown(g,
                   {"generator_hidden", "discriminator_hidden", "noise_dim", "leaky_slope", "generator_lr",
                    "discriminator_lr", "k2", "generator_steps", "discriminator_steps"},
                   "gan");
    auto& s = c.gan;
    read(g, "generator_hidden", s.generator_hidden, "gan");
    read(g, "discriminator_hidden", s.discriminator_hidden, "gan");
    read(g, "noise_dim", s.noise_dim, "gan");
    read(g, "leaky_slope", s.leaky_slope, "gan");
    read(g, "generator_lr", s.generator_lr, "gan");
    read(g, "discriminator_lr", s.discriminator_lr, "gan");
    read(g, "k2", s.k2, "gan");
    read(g, "generator_steps", s.generator_steps, "gan");
    read(g, "discriminator_steps", s.discriminator_steps, "gan");
  }
  validate(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  const auto& a = c.agent;
  const auto& g = c.gan;
  json agent{{"hidden", a.hidden},
             {"dueling", a.dueling},
             {"double_q", a.double_q},
             {"optimizer", optimizer_name(a.optimizer)},
             {"learning_rate", a.learning_rate},
             {"gamma", a.gamma},
             {"n_step", a.n_step},
             {"random_n_step", a.random_n_step},
             {"batch_size", a.batch_size},
             {"replay_capacity", a.replay_capacity},
             {"replay_start", a.replay_start},
             {"target_sync", a.target_sync},
             {"gradient_clip", a.gradient_clip ? json::array({a.gradient_clip->first, a.gradient_clip->second})
                                               : json(nullptr)},
             {"clip_extrinsic", a.clip_extrinsic},
             {"epsilon_initial", a.epsilon_initial},
             {"epsilon_final", a.epsilon_final},
             {"epsilon_decay", a.epsilon_decay},
             {"epsilon_stage_floor", a.epsilon_stage_floor ? json(*a.epsilon_stage_floor) : json(nullptr)},
             {"epsilon_stage_decay", a.epsilon_stage_decay},
             {"epsilon_clock", clock_name(a.epsilon_clock)},
             {"train_unit", unit_name(a.train_unit)},
             {"k1", a.k1}};
  json gan{{"generator_hidden", g.generator_hidden},
           {"discriminator_hidden", g.discriminator_hidden},
           {"noise_dim", g.noise_dim},
           {"leaky_slope", g.leaky_slope},
           {"generator_lr", g.generator_lr},
           {"discriminator_lr", g.discriminator_lr},
           {"k2", g.k2},
           {"generator_steps", g.generator_steps},
           {"discriminator_steps", g.discriminator_steps}};
  return json{{"name", c.name},         {"env", to_string(c.env)}, {"chain_length", c.chain_length},
              {"mode", to_string(c.mode)}, {"beta", c.beta},         {"episodes", c.episodes},
              {"seeds", c.seeds},       {"agent", agent},          {"gan", gan},
              {"output_dir", c.output_dir}};
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config " + path.string());
  out << config_to_json(config).dump(2) << '\n';
}

std::uint64_t config_hash(const RunConfig& config) {
  json doc = config_to_json(config);
  doc.erase("output_dir");
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

QLearnerConfig learner_config(const RunConfig& config) {
  const auto& a = config.agent;
  QLearnerConfig q;
  q.hidden = a.hidden;
  q.dueling = a.dueling;
  q.double_q = a.double_q;
  q.gamma = a.gamma;
  q.n_step = a.n_step;
  q.random_n_step = a.random_n_step;
  q.optimizer.kind = a.optimizer;
  q.optimizer.learning_rate = a.learning_rate;
  q.gradient_clip = a.gradient_clip;
  q.target_sync_period = a.target_sync;
  return q;
}

EpsilonSchedule epsilon_schedule(const RunConfig& config) {
  const auto& a = config.agent;
  EpsilonSchedule s;
  s.initial = a.epsilon_initial;
  s.final_value = a.epsilon_final;
  s.decay = a.epsilon_decay;
  s.stage_floor = a.epsilon_stage_floor;
  s.stage_decay = a.epsilon_stage_decay;
  return s;
}

}  // namespace gaex
