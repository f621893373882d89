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

#include "gaex/envs.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "gaex/errors.hpp"

namespace gaex {

ChainMdp::ChainMdp(int length) : length_(length) {
  if (length < 3) throw ConfigError("chain length must be at least 3, got " + std::to_string(length));
}

ChainState ChainMdp::reset(std::uint64_t /*seed*/) const { return ChainState{2, 0}; }

ChainStep ChainMdp::step(const ChainState& state, int action) const {
  if (done(state)) throw ContractError("chain episode already finished");
  if (state.index < 1 || state.index > length_) throw ContractError("chain index out of range");
  if (action != kChainLeft && action != kChainRight) {
    throw ContractError("chain action must be 0 (left) or 1 (right), got " + std::to_string(action));
  }
  ChainStep out;
  out.state.index = std::clamp(state.index + (action == kChainRight ? 1 : -1), 1, length_);
  out.state.step = state.step + 1;
  if (out.state.index == 1) {
    out.reward = kSmallReward;
  } else if (out.state.index == length_) {
    out.reward = kLargeReward;
  }
  out.done = done(out.state);
  return out;
}

Vector ChainMdp::encode(const ChainState& state) const {
  Vector v = Vector::Zero(length_);
  v(state.index - 1) = 1.0;
  return v;
}

int ChainMdp::decode(const Vector& observation) {
  for (Eigen::Index i = 0; i < observation.size(); ++i) {
    if (observation(i) == 1.0) return static_cast<int>(i) + 1;
  }
  return 0;
}

Real chain_optimal_return(int length) {
  const ChainMdp chain(length);
  const int horizon = chain.horizon();
  // value[i] = best return from index i with k steps left; i is 1-based.
  std::vector<Real> value(length + 1, 0.0);
  std::vector<Real> next(length + 1, 0.0);
  for (int left = 1; left <= horizon; ++left) {
    for (int i = 1; i <= length; ++i) {
      Real best = -1.0;
      for (int a = 0; a < ChainMdp::kNumActions; ++a) {
        const ChainStep s = chain.step(ChainState{i, horizon - left}, a);
        best = std::max(best, s.reward + value[s.state.index]);
      }
      next[i] = best;
    }
    std::swap(value, next);
  }
  return value[chain.reset().index];
}

Plane PixelGrid::render() const {
  constexpr int kSize = PixelObservation::kSize;
  Plane plane = Plane::Zero(kSize, kSize);
  plane.block(goal_.row * kCellPixels, goal_.col * kCellPixels, kCellPixels, kCellPixels).setConstant(kGoalIntensity);
  plane.block(agent_.row * kCellPixels, agent_.col * kCellPixels, kCellPixels, kCellPixels)
      .setConstant(kAgentIntensity);
  return plane;
}

PixelObservation PixelGrid::reset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, kCells - 1);
  Cell goal{cell(rng), cell(rng)};
  Cell agent{cell(rng), cell(rng)};
  while (agent == goal) agent = Cell{cell(rng), cell(rng)};
  return reset_at(agent, goal);
}

PixelObservation PixelGrid::reset_at(Cell agent, Cell goal) {
  auto in_range = [](Cell c) { return c.row >= 0 && c.row < kCells && c.col >= 0 && c.col < kCells; };
  if (!in_range(agent) || !in_range(goal)) throw ContractError("grid cell out of range");
  agent_ = agent;
  goal_ = goal;
  steps_ = 0;
  done_ = false;
  const Plane first = render();
  for (auto& f : stack_.frames) f = first;
  return observation();
}

PixelGrid::Step PixelGrid::step(int action) {
  if (action < 0 || action >= kNumActions) {
    throw ContractError("grid action must be in [0, 5), got " + std::to_string(action));
  }
  if (done_) throw ContractError("grid episode already finished");
  switch (action) {
    case kGridUp: agent_.row = std::max(agent_.row - 1, 0); break;
    case kGridDown: agent_.row = std::min(agent_.row + 1, kCells - 1); break;
    case kGridLeft: agent_.col = std::max(agent_.col - 1, 0); break;
    case kGridRight: agent_.col = std::min(agent_.col + 1, kCells - 1); break;
    default: break;
  }
  ++steps_;
  Step out;
  if (agent_ == goal_) out.reward = 1.0;
  done_ = agent_ == goal_ || steps_ >= kHorizon;
  out.done = done_;
  for (int i = 0; i + 1 < PixelObservation::kFrames; ++i) stack_.frames[i] = std::move(stack_.frames[i + 1]);
  stack_.frames.back() = render();
  out.observation = observation();
  return out;
}

}  // namespace gaex
