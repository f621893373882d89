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

#ifndef GAEX_OPTIM_HPP_
#define GAEX_OPTIM_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gaex/nn.hpp"

namespace gaex {

enum class OptimizerKind { kAdam, kRmsProp };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double rms_decay = 0.95;
  double rms_epsilon = 0.01;
};

template <typename Scalar>
struct OptimizerState {
  OptimizerConfig config;
  std::vector<Matrix<Scalar>> first_moment;   // Adam m
  std::vector<Matrix<Scalar>> second_moment;  // Adam v, RMSProp E[g^2]
  std::int64_t step = 0;

  OptimizerState() = default;
  explicit OptimizerState(OptimizerConfig c) : config(c) {}
};

// Applies one update to every parameter using the gradients they currently
// hold. Moment buffers are created lazily on the first call.
template <typename Scalar>
void optimizer_step(OptimizerState<Scalar>& state, std::span<const NamedTensor<Scalar>> params) {
  for (const auto& p : params) {
    if (!p.tensor.grad().allFinite()) throw NumericalFault("non-finite gradient in " + p.name);
  }
  if (state.second_moment.empty()) {
    for (const auto& p : params) {
      state.first_moment.push_back(Matrix<Scalar>::Zero(p.tensor.rows(), p.tensor.cols()));
      state.second_moment.push_back(Matrix<Scalar>::Zero(p.tensor.rows(), p.tensor.cols()));
    }
  }
  if (state.second_moment.size() != params.size()) {
    throw DimensionError("optimizer tracks " + std::to_string(state.second_moment.size()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (state.second_moment[i].rows() != params[i].tensor.rows() ||
        state.second_moment[i].cols() != params[i].tensor.cols()) {
      throw DimensionError("optimizer moment shape mismatch for " + params[i].name);
    }
  }

  ++state.step;
  const auto& c = state.config;
  const Scalar lr = static_cast<Scalar>(c.learning_rate);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor<Scalar> t = params[i].tensor;
    const auto& g = t.grad().array();
    auto& v = state.second_moment[i];
    if (c.kind == OptimizerKind::kAdam) {
      const Scalar b1 = static_cast<Scalar>(c.beta1);
      const Scalar b2 = static_cast<Scalar>(c.beta2);
      auto& m = state.first_moment[i];
      m.array() = b1 * m.array() + (Scalar(1) - b1) * g;
      v.array() = b2 * v.array() + (Scalar(1) - b2) * g.square();
      const Scalar c1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(state.step));
      const Scalar c2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(state.step));
      t.mutable_value().array() -=
          lr * (m.array() / c1) / ((v.array() / c2).sqrt() + static_cast<Scalar>(c.adam_epsilon));
    } else {
      const Scalar rho = static_cast<Scalar>(c.rms_decay);
      v.array() = rho * v.array() + (Scalar(1) - rho) * g.square();
      t.mutable_value().array() -= lr * g / (v.array() + static_cast<Scalar>(c.rms_epsilon)).sqrt();
    }
  }
}

template <typename Scalar>
void clip_gradients(Matrix<Scalar>& grad, Scalar lo, Scalar hi) {
  if (!(lo < hi)) throw ContractError("clip_gradients: need lo < hi");
  grad = grad.cwiseMax(lo).cwiseMin(hi);
}

template <typename Scalar>
void clip_gradients(std::span<const NamedTensor<Scalar>> params, Scalar lo, Scalar hi) {
  if (!(lo < hi)) throw ContractError("clip_gradients: need lo < hi");
  for (const auto& p : params) {
    Tensor<Scalar> t = p.tensor;
    clip_gradients(t.mutable_grad(), lo, hi);
  }
}

}  // namespace gaex

#endif  // GAEX_OPTIM_HPP_
