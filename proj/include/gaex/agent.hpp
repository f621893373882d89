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

// Double/dueling DQN with n-step returns, epsilon-greedy acting, uniform
// experience replay and a visit-count bonus baseline.

#ifndef GAEX_AGENT_HPP_
#define GAEX_AGENT_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gaex/nn.hpp"
#include "gaex/optim.hpp"
#include "gaex/types.hpp"

namespace gaex {

struct Transition {
  Vector state;
  int action = 0;
  Real extrinsic_reward = 0;
  Vector next_state;
  bool done = false;
};

// Fixed-capacity FIFO ring. Logical index 0 is the oldest stored transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void store(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return items_.size(); }
  const Transition& at(std::size_t logical) const;

  // Uniform with replacement over the current contents.
  std::vector<std::size_t> sample_indices(std::size_t count, std::mt19937_64& rng) const;

  // Number of consecutive transitions, at most `n`, starting at `logical`
  // that belong to one episode: the run stops after a done flag or at the
  // newest entry.
  int window_length(std::size_t logical, int n) const;

 private:
  std::vector<Transition> items_;
  std::size_t next_ = 0;
  std::size_t size_ = 0;
};

// Linear decay with an optional second, slower stage:
//   initial -> stage_floor at `decay` per step, then -> final at `stage_decay`.
struct EpsilonSchedule {
  Real initial = 1.0;
  Real final_value = 0.0;
  Real decay = 0.0005;
  std::optional<Real> stage_floor;
  Real stage_decay = 0;

  Real value(std::int64_t steps) const;
};

struct QLearnerConfig {
  std::vector<Index> hidden{64, 128, 256, 128};
  bool dueling = true;
  bool double_q = true;
  Real gamma = 0.99;
  int n_step = 10;
  bool random_n_step = false;  // draw n uniformly from 1..n_step per sample
  OptimizerConfig optimizer{OptimizerKind::kAdam, 0.005};
  std::optional<std::pair<Real, Real>> gradient_clip;
  int target_sync_period = 50;
};

class QLearner {
 public:
  QLearner(Index observation_dim, int num_actions, QLearnerConfig config, std::mt19937_64& rng);

  const QLearnerConfig& config() const { return config_; }
  int num_actions() const { return num_actions_; }
  std::int64_t updates() const { return updates_; }

  Batch q_values(const Batch& observations) const;
  Batch target_q_values(const Batch& observations) const;

  int select_action(const Vector& observation, Real epsilon, std::mt19937_64& rng) const;

  // One optimizer step on mean (Q(s, a) - target)^2. Syncs the target network
  // every target_sync_period updates. Returns the pre-update loss.
  Real update(const Batch& states, std::span<const int> actions, const Vector& targets);
  void sync_target();

  NetworkParams<Real>& online() { return online_; }
  const NetworkParams<Real>& online() const { return online_; }
  NetworkParams<Real>& target() { return target_; }
  const NetworkParams<Real>& target() const { return target_; }

 private:
  QLearnerConfig config_;
  int num_actions_;
  NetworkParams<Real> online_;
  NetworkParams<Real> target_;
  OptimizerState<Real> optimizer_;
  std::int64_t updates_ = 0;
};

// Lowest index among the maximal entries.
int greedy_action(const Vector& q);

// With probability epsilon a uniform action, otherwise greedy on `q`. Always
// consumes the same random draws regardless of the branch taken.
int epsilon_greedy(const Vector& q, Real epsilon, std::mt19937_64& rng);

struct NStepSample {
  std::vector<Real> rewards;  // r_t .. r_{t+k-1}, already augmented
  Vector bootstrap_state;     // s_{t+k}
  bool terminal = false;      // s_{t+k} ends the episode: no bootstrap
};

// sum_k gamma^k r_{t+k} + gamma^len Q_target(s', argmax_a Q_online(s', a)),
// given the bootstrap rows already evaluated by both networks.
Vector n_step_targets(std::span<const NStepSample> samples, const Batch& online_boot, const Batch& target_boot,
                      Real gamma, bool double_q);
Vector n_step_targets(std::span<const NStepSample> samples, const QLearner& learner);

class VisitCounter {
 public:
  void visit(int state) { ++counts_[state]; }
  std::int64_t count(int state) const;

 private:
  std::unordered_map<int, std::int64_t> counts_;
};

// beta / sqrt(N(s)); an unvisited state gets the optimistic value beta.
Real count_bonus(const VisitCounter& counter, int state, Real beta);

}  // namespace gaex

#endif  // GAEX_AGENT_HPP_
