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

#include "gaex/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaex/errors.hpp"

namespace gaex {

ReplayBuffer::ReplayBuffer(std::size_t capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be positive");
  items_.resize(capacity);
}

void ReplayBuffer::store(Transition t) {
  items_[next_] = std::move(t);
  next_ = (next_ + 1) % items_.size();
  size_ = std::min(size_ + 1, items_.size());
}

const Transition& ReplayBuffer::at(std::size_t logical) const {
  if (logical >= size_) throw ContractError("replay index out of range");
  const std::size_t oldest = size_ < items_.size() ? 0 : next_;
  return items_[(oldest + logical) % items_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, std::mt19937_64& rng) const {
  if (size_ == 0) throw ContractError("cannot sample from an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> out(count);
  for (auto& i : out) i = pick(rng);
  return out;
}

int ReplayBuffer::window_length(std::size_t logical, int n) const {
  if (n < 1) throw ContractError("n-step window must be at least 1");
  int len = 0;
  for (std::size_t i = logical; i < size_ && len < n; ++i) {
    ++len;
    if (at(i).done) break;
  }
  return len;
}

Real EpsilonSchedule::value(std::int64_t steps) const {
  const Real k = static_cast<Real>(std::max<std::int64_t>(steps, 0));
  if (!stage_floor) return std::max(final_value, initial - decay * k);
  const Real floor = std::min(initial, std::max(*stage_floor, final_value));
  const Real first = initial - decay * k;
  if (first >= floor) return first;
  const Real switch_step = decay > 0 ? (initial - floor) / decay : 0.0;
  return std::max(final_value, floor - stage_decay * (k - switch_step));
}

QLearner::QLearner(Index observation_dim, int num_actions, QLearnerConfig config, std::mt19937_64& rng)
    : config_(std::move(config)), num_actions_(num_actions), optimizer_(config_.optimizer) {
  if (num_actions < 1) throw ConfigError("need at least one action");
  if (!(config_.gamma > 0 && config_.gamma < 1)) throw ConfigError("gamma must lie in (0, 1)");
  if (config_.n_step < 1) throw ConfigError("n_step must be at least 1");
  if (config_.target_sync_period < 1) throw ConfigError("target_sync_period must be at least 1");
  MlpSpec spec;
  spec.input_dim = observation_dim;
  spec.hidden = config_.hidden;
  spec.output_dim = num_actions;
  spec.activation = Activation::kRelu;
  spec.head = config_.dueling ? HeadKind::kDueling : HeadKind::kPlain;
  online_ = make_mlp<Real>(spec, rng);
  target_ = online_.clone();
}

Batch QLearner::q_values(const Batch& observations) const { return evaluate_mlp(online_, observations); }

Batch QLearner::target_q_values(const Batch& observations) const { return evaluate_mlp(target_, observations); }

int greedy_action(const Vector& q) {
  int best = 0;
  for (Index a = 1; a < q.size(); ++a) {
    if (q(a) > q(best)) best = static_cast<int>(a);
  }
  return best;
}

int epsilon_greedy(const Vector& q, Real epsilon, std::mt19937_64& rng) {
  if (!(epsilon >= 0 && epsilon <= 1)) throw ContractError("epsilon must lie in [0, 1]");
  std::uniform_real_distribution<Real> coin(0.0, 1.0);
  std::uniform_int_distribution<int> any(0, static_cast<int>(q.size()) - 1);
  const Real u = coin(rng);
  const int random_action = any(rng);
  return u < epsilon ? random_action : greedy_action(q);
}

int QLearner::select_action(const Vector& observation, Real epsilon, std::mt19937_64& rng) const {
  const Vector q = q_values(Batch(observation.transpose())).row(0).transpose();
  return epsilon_greedy(q, epsilon, rng);
}

Real QLearner::update(const Batch& states, std::span<const int> actions, const Vector& targets) {
  if (states.rows() == 0) throw ContractError("empty DQN batch");
  if (static_cast<Index>(actions.size()) != states.rows() || targets.size() != states.rows()) {
    throw DimensionError("DQN batch: states, actions and targets differ in length");
  }
  using T = Tensor<Real>;
  online_.zero_grad();
  const T q = forward_mlp(online_, T(states));
  const T chosen = gather_columns(q, actions);
  const T loss = mean(square(chosen - T(Batch(targets))));
  const Real value = loss.item();
  if (!std::isfinite(value)) throw NumericalFault("TD loss is not finite");
  loss.backward();
  const auto params = online_.named_parameters();
  if (config_.gradient_clip) {
    clip_gradients<Real>(params, config_.gradient_clip->first, config_.gradient_clip->second);
  }
  optimizer_step<Real>(optimizer_, params);
  ++updates_;
  if (updates_ % config_.target_sync_period == 0) sync_target();
  return value;
}

void QLearner::sync_target() { target_.copy_values_from(online_); }

Vector n_step_targets(std::span<const NStepSample> samples, const Batch& online_boot, const Batch& target_boot,
                      Real gamma, bool double_q) {
  const Index n = static_cast<Index>(samples.size());
  if (online_boot.rows() != n || target_boot.rows() != n) throw DimensionError("bootstrap rows differ from samples");
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (s.rewards.empty()) throw ContractError("n-step sample with no rewards");
    Real total = 0;
    Real discount = 1;
    for (Real r : s.rewards) {
      total += discount * r;
      discount *= gamma;
    }
    if (!s.terminal) {
      const Vector online_q = online_boot.row(i).transpose();
      const Real boot = double_q ? target_boot(i, greedy_action(online_q)) : target_boot.row(i).maxCoeff();
      total += discount * boot;
    }
    out(i) = total;
  }
  return out;
}

Vector n_step_targets(std::span<const NStepSample> samples, const QLearner& learner) {
  if (samples.empty()) throw ContractError("n-step targets need at least one sample");
  Batch boot(static_cast<Index>(samples.size()), samples.front().bootstrap_state.size());
  for (std::size_t i = 0; i < samples.size(); ++i) boot.row(static_cast<Index>(i)) = samples[i].bootstrap_state.transpose();
  return n_step_targets(samples, learner.q_values(boot), learner.target_q_values(boot), learner.config().gamma,
                        learner.config().double_q);
}

std::int64_t VisitCounter::count(int state) const {
  const auto it = counts_.find(state);
  return it == counts_.end() ? 0 : it->second;
}

Real count_bonus(const VisitCounter& counter, int state, Real beta) {
  const auto n = counter.count(state);
  return n == 0 ? beta : beta / std::sqrt(static_cast<Real>(n));
}

}  // namespace gaex
