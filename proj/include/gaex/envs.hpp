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

// Reference environments: the N-state chain MDP and a small pixel gridworld
// that emits stacked 84x84 grayscale frames.

#ifndef GAEX_ENVS_HPP_
#define GAEX_ENVS_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <utility>

#include "gaex/types.hpp"

namespace gaex {

struct ChainState {
  int index = 2;  // 1-based state label s_index
  int step = 0;   // actions taken so far

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

enum ChainAction : int { kChainLeft = 0, kChainRight = 1 };

struct ChainStep {
  ChainState state;
  Real reward = 0;
  bool done = false;
};

// States s_1..s_N in a row, start in s_2, deterministic left/right moves
// clamped at both ends. The step that lands in (or stays in) s_1 pays 1/1000,
// landing in s_N pays 1. Episodes last N + 9 actions.
class ChainMdp {
 public:
  static constexpr int kNumActions = 2;
  static constexpr Real kSmallReward = 1.0 / 1000.0;
  static constexpr Real kLargeReward = 1.0;

  explicit ChainMdp(int length);

  int length() const { return length_; }
  int horizon() const { return length_ + 9; }

  // The seed is accepted for interface symmetry; the chain has no randomness.
  ChainState reset(std::uint64_t seed = 0) const;
  ChainStep step(const ChainState& state, int action) const;
  bool done(const ChainState& state) const { return state.step >= horizon(); }

  // One-hot vector of length N with the 1 at position index - 1.
  Vector encode(const ChainState& state) const;
  // Inverse of encode for the index; returns 0 if no component is set.
  static int decode(const Vector& observation);

 private:
  int length_;
};

// Best achievable undiscounted episode return, by backward induction over
// (index, steps remaining).
Real chain_optimal_return(int length);

struct PixelObservation {
  static constexpr int kFrames = 4;
  static constexpr int kSize = 84;
  std::array<Plane, kFrames> frames;  // oldest first
};

enum GridAction : int { kGridUp = 0, kGridDown, kGridLeft, kGridRight, kGridStay };

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// A bright 4x4-pixel sprite on a dark 21x21-cell board. Entering the goal cell
// pays 1 and ends the episode; otherwise the episode ends after 500 steps.
class PixelGrid {
 public:
  static constexpr int kCells = 21;
  static constexpr int kCellPixels = 4;
  static constexpr int kHorizon = 500;
  static constexpr int kNumActions = 5;
  static constexpr Real kAgentIntensity = 1.0;
  static constexpr Real kGoalIntensity = 0.5;

  struct Step {
    PixelObservation observation;
    Real reward = 0;
    bool done = false;
  };

  PixelObservation reset(std::uint64_t seed);
  // Same as reset but with explicit placement.
  PixelObservation reset_at(Cell agent, Cell goal);
  Step step(int action);

  Cell agent() const { return agent_; }
  Cell goal() const { return goal_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }

  Plane render() const;

 private:
  PixelObservation observation() const { return stack_; }

  Cell agent_;
  Cell goal_;
  int steps_ = 0;
  bool done_ = true;
  PixelObservation stack_;
};

}  // namespace gaex

#endif  // GAEX_ENVS_HPP_
