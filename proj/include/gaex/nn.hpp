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

#ifndef GAEX_NN_HPP_
#define GAEX_NN_HPP_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gaex/tensor.hpp"

namespace gaex {

enum class Activation { kRelu, kLeakyRelu };
enum class HeadKind { kPlain, kDueling };
enum class OutputKind { kLinear, kSigmoid };

template <typename Scalar>
struct DenseLayer {
  Tensor<Scalar> weight;  // in x out
  Tensor<Scalar> bias;    // 1 x out
};

template <typename Scalar>
struct NamedTensor {
  std::string name;
  Tensor<Scalar> tensor;
};

struct MlpSpec {
  Index input_dim = 0;
  std::vector<Index> hidden;
  Index output_dim = 0;
  Activation activation = Activation::kRelu;
  double leaky_slope = 0.01;
  HeadKind head = HeadKind::kPlain;
  OutputKind output = OutputKind::kLinear;
};

template <typename Scalar>
struct NetworkParams {
  std::vector<DenseLayer<Scalar>> layers;
  Activation activation = Activation::kRelu;
  Scalar leaky_slope = Scalar(0.01);
  HeadKind head = HeadKind::kPlain;
  OutputKind output = OutputKind::kLinear;

  Index input_dim() const { return layers.front().weight.rows(); }
  Index output_dim() const {
    const Index raw = layers.back().weight.cols();
    return head == HeadKind::kDueling ? raw - 1 : raw;
  }

  std::vector<NamedTensor<Scalar>> named_parameters() const {
    std::vector<NamedTensor<Scalar>> out;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      out.push_back({"layer" + std::to_string(i) + ".weight", layers[i].weight});
      out.push_back({"layer" + std::to_string(i) + ".bias", layers[i].bias});
    }
    return out;
  }

  // Deep copy with fresh, independent parameter leaves.
  NetworkParams clone() const {
    NetworkParams copy = *this;
    for (auto& layer : copy.layers) {
      layer.weight = Tensor<Scalar>::parameter(layer.weight.value());
      layer.bias = Tensor<Scalar>::parameter(layer.bias.value());
    }
    return copy;
  }

  void copy_values_from(const NetworkParams& other) {
    if (other.layers.size() != layers.size()) throw DimensionError("copy_values_from: layer count differs");
    for (std::size_t i = 0; i < layers.size(); ++i) {
      layers[i].weight.mutable_value() = other.layers[i].weight.value();
      layers[i].bias.mutable_value() = other.layers[i].bias.value();
    }
  }

  void zero_grad() {
    for (auto& layer : layers) {
      layer.weight.zero_grad();
      layer.bias.zero_grad();
    }
  }
};

template <typename Scalar>
bool values_equal(const NetworkParams<Scalar>& a, const NetworkParams<Scalar>& b) {
  if (a.layers.size() != b.layers.size()) return false;
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    if (a.layers[i].weight.value() != b.layers[i].weight.value()) return false;
    if (a.layers[i].bias.value() != b.layers[i].bias.value()) return false;
  }
  return true;
}

// He-uniform init for layers feeding a ReLU, Xavier-uniform otherwise. Biases
// start at zero.
template <typename Scalar, typename Rng>
NetworkParams<Scalar> make_mlp(const MlpSpec& spec, Rng& rng) {
  if (spec.input_dim <= 0 || spec.output_dim <= 0) throw ConfigError("MLP dimensions must be positive");
  NetworkParams<Scalar> params;
  params.activation = spec.activation;
  params.leaky_slope = static_cast<Scalar>(spec.leaky_slope);
  params.head = spec.head;
  params.output = spec.output;

  std::vector<Index> dims{spec.input_dim};
  dims.insert(dims.end(), spec.hidden.begin(), spec.hidden.end());
  dims.push_back(spec.head == HeadKind::kDueling ? spec.output_dim + 1 : spec.output_dim);

  for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
    const Index fan_in = dims[i];
    const Index fan_out = dims[i + 1];
    const bool hidden = i + 2 < dims.size();
    const double limit = (hidden && spec.activation == Activation::kRelu)
                             ? std::sqrt(6.0 / static_cast<double>(fan_in))
                             : std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    Matrix<Scalar> w(fan_in, fan_out);
    for (Index r = 0; r < fan_in; ++r)
      for (Index c = 0; c < fan_out; ++c) w(r, c) = static_cast<Scalar>(dist(rng));
    params.layers.push_back({Tensor<Scalar>::parameter(std::move(w)),
                             Tensor<Scalar>::parameter(Matrix<Scalar>::Zero(1, fan_out))});
  }
  return params;
}

namespace detail {

template <typename Scalar>
void check_input(const NetworkParams<Scalar>& params, Index cols) {
  if (params.layers.empty()) throw DimensionError("network has no layers");
  if (cols != params.input_dim()) {
    throw DimensionError("layer 0: expected input dim " + std::to_string(params.input_dim()) + ", got " +
                         std::to_string(cols));
  }
  for (std::size_t i = 1; i < params.layers.size(); ++i) {
    if (params.layers[i].weight.rows() != params.layers[i - 1].weight.cols()) {
      throw DimensionError("layer " + std::to_string(i) + ": expected input dim " +
                           std::to_string(params.layers[i].weight.rows()) + ", previous layer gives " +
                           std::to_string(params.layers[i - 1].weight.cols()));
    }
  }
}

}  // namespace detail

// Batched forward pass (rows are samples) with graph recording.
template <typename Scalar>
Tensor<Scalar> forward_mlp(const NetworkParams<Scalar>& params, const Tensor<Scalar>& input) {
  detail::check_input(params, input.cols());
  Tensor<Scalar> h = input;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    h = matmul(h, params.layers[i].weight) + params.layers[i].bias;
    if (i + 1 < params.layers.size()) {
      h = params.activation == Activation::kRelu ? relu(h) : leaky_relu(h, params.leaky_slope);
    }
  }
  if (params.head == HeadKind::kDueling) h = dueling_combine(h);
  if (params.output == OutputKind::kSigmoid) h = sigmoid(h);
  return h;
}

namespace detail {

// Runs layers [1, L) plus heads on the pre-activation of layer 0.
template <typename Scalar>
Matrix<Scalar> finish_mlp(const NetworkParams<Scalar>& params, Matrix<Scalar> h) {
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    if (i > 0) {
      Matrix<Scalar> next = h * params.layers[i].weight.value();
      next.rowwise() += params.layers[i].bias.value().row(0);
      h = std::move(next);
    }
    if (i + 1 < params.layers.size()) {
      if (params.activation == Activation::kRelu) {
        h = h.cwiseMax(Scalar(0));
      } else {
        h = (h.array() > Scalar(0)).select(h, params.leaky_slope * h);
      }
    }
  }
  if (params.head == HeadKind::kDueling) h = dueling_values<Scalar>(h);
  if (params.output == OutputKind::kSigmoid) h = sigmoid_values<Scalar>(h);
  return h;
}

}  // namespace detail

// Same arithmetic as forward_mlp without building a graph.
template <typename Scalar>
Matrix<Scalar> evaluate_mlp(const NetworkParams<Scalar>& params, const Matrix<Scalar>& input) {
  detail::check_input(params, input.cols());
  Matrix<Scalar> h = input * params.layers[0].weight.value();
  h.rowwise() += params.layers[0].bias.value().row(0);
  return detail::finish_mlp(params, std::move(h));
}

// Outputs for every standard basis input e_0 .. e_{d-1}, row i for e_i. Equal
// to evaluate_mlp on the identity without the first dense product.
template <typename Scalar>
Matrix<Scalar> evaluate_mlp_one_hot(const NetworkParams<Scalar>& params) {
  detail::check_input(params, params.input_dim());
  Matrix<Scalar> h = params.layers[0].weight.value();
  h.rowwise() += params.layers[0].bias.value().row(0);
  return detail::finish_mlp(params, std::move(h));
}

}  // namespace gaex

#endif  // GAEX_NN_HPP_
