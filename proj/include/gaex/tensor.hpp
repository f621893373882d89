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

// Dense tensors with define-by-run reverse-mode differentiation.
//
// A Tensor is a cheap handle onto a graph node. Values are stored as a
// row-major Eigen matrix; tensors of rank > 2 keep their full shape and view
// the data as shape[0] x (product of the remaining dims). Every operation
// below records a backward closure when any input requires a gradient, and
// Tensor::backward() walks the recorded graph once.

#ifndef GAEX_TENSOR_HPP_
#define GAEX_TENSOR_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gaex/errors.hpp"

namespace gaex {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Index shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), Index{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? ", " : "") << shape[i];
  out << ')';
  return out.str();
}

namespace detail {

template <typename Scalar>
struct Node {
  Matrix<Scalar> value;
  Matrix<Scalar> grad;
  Shape shape;
  bool requires_grad = false;
  bool consumed = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  bool is_leaf() const { return parents.empty(); }

  template <typename Expr>
  void accumulate(const Expr& g) {
    if (!requires_grad) return;
    if (grad.size() == 0) grad = Matrix<Scalar>::Zero(value.rows(), value.cols());
    grad += g;
  }
};

inline Shape matrix_shape(Index rows, Index cols) { return {rows, cols}; }

}  // namespace detail

template <typename Scalar>
class Tensor {
 public:
  using MatrixType = Matrix<Scalar>;
  using NodeType = detail::Node<Scalar>;

  Tensor() = default;

  explicit Tensor(MatrixType value, bool requires_grad = false)
      : node_(std::make_shared<NodeType>()) {
    node_->shape = detail::matrix_shape(value.rows(), value.cols());
    node_->value = std::move(value);
    node_->requires_grad = requires_grad;
    if (requires_grad) node_->grad = MatrixType::Zero(node_->value.rows(), node_->value.cols());
  }

  // Builds a tensor of arbitrary rank from a flat row-major buffer.
  static Tensor from_shape(Shape shape, std::span<const Scalar> data, bool requires_grad = false) {
    if (shape_size(shape) != static_cast<Index>(data.size())) {
      throw DimensionError("tensor shape " + shape_string(shape) + " holds " +
                           std::to_string(shape_size(shape)) + " elements, got " +
                           std::to_string(data.size()));
    }
    const Index rows = shape.size() >= 2 ? shape[0] : 1;
    const Index cols = rows == 0 ? 0 : shape_size(shape) / rows;
    MatrixType m = Eigen::Map<const MatrixType>(data.data(), rows, cols);
    Tensor t(std::move(m), requires_grad);
    t.node_->shape = std::move(shape);
    return t;
  }

  static Tensor scalar(Scalar v, bool requires_grad = false) {
    MatrixType m(1, 1);
    m(0, 0) = v;
    Tensor t(std::move(m), requires_grad);
    t.node_->shape = {};
    return t;
  }

  static Tensor parameter(MatrixType value) { return Tensor(std::move(value), true); }

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node_->shape; }
  Index rows() const { return node_->value.rows(); }
  Index cols() const { return node_->value.cols(); }
  Index size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  const MatrixType& value() const { return node_->value; }
  // Direct write access for optimizers and weight surgery. Only valid on leaves.
  MatrixType& mutable_value() {
    if (!node_->is_leaf()) throw ContractError("mutable_value() on a non-leaf tensor");
    return node_->value;
  }

  bool has_grad() const { return node_->grad.size() != 0; }
  const MatrixType& grad() const {
    if (!has_grad()) node_->grad = MatrixType::Zero(rows(), cols());
    return node_->grad;
  }
  MatrixType& mutable_grad() {
    if (!has_grad()) node_->grad = MatrixType::Zero(rows(), cols());
    return node_->grad;
  }
  void zero_grad() { node_->grad = MatrixType::Zero(rows(), cols()); }

  Scalar item() const {
    if (size() != 1) throw ContractError("item() on a tensor with " + std::to_string(size()) + " elements");
    return node_->value(0, 0);
  }

  // A copy of the value with no graph history.
  Tensor detach() const { return Tensor(node_->value, false); }

  // Reverse pass from a scalar loss. Leaf gradients accumulate; callers zero
  // them between steps.
  void backward() const;

  // Internal: used by operations to build graph nodes.
  static Tensor make_result(MatrixType value, std::vector<std::shared_ptr<NodeType>> parents,
                            std::function<void(NodeType&)> backward) {
    Tensor t(std::move(value), false);
    bool needs = false;
    for (const auto& p : parents) needs = needs || p->requires_grad;
    if (needs) {
      t.node_->requires_grad = true;
      t.node_->grad.resize(0, 0);
      t.node_->parents = std::move(parents);
      t.node_->backward = std::move(backward);
    }
    return t;
  }

  const std::shared_ptr<NodeType>& node() const { return node_; }

 private:
  std::shared_ptr<NodeType> node_;
};

template <typename Scalar>
void Tensor<Scalar>::backward() const {
  if (size() != 1) {
    throw ContractError("backward() needs a scalar loss, got shape " + shape_string(shape()));
  }
  if (!node_->requires_grad) return;

  // Iterative post-order DFS for a topological order.
  std::vector<NodeType*> order;
  std::unordered_set<NodeType*> seen;
  std::vector<std::pair<NodeType*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      NodeType* p = n->parents[next++].get();
      if (p->requires_grad && !seen.count(p)) {
        seen.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  for (NodeType* n : order) {
    if (!n->is_leaf() && n->consumed) {
      throw ContractError("graph already used by a previous backward pass");
    }
  }
  for (NodeType* n : order) {
    if (!n->is_leaf()) n->grad = MatrixType::Zero(n->value.rows(), n->value.cols());
  }
  node_->grad(0, 0) = Scalar(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeType* n = *it;
    if (n->is_leaf()) continue;
    n->backward(*n);
    n->consumed = true;
  }
}

// ---------------------------------------------------------------------------
// Operations

namespace detail {

enum class Broadcast { kNone, kRow, kScalar };

template <typename Scalar>
Broadcast broadcast_kind(const Tensor<Scalar>& a, const Tensor<Scalar>& b, const char* op) {
  if (a.rows() == b.rows() && a.cols() == b.cols()) return Broadcast::kNone;
  if (b.rows() == 1 && b.cols() == 1) return Broadcast::kScalar;
  if (b.rows() == 1 && b.cols() == a.cols()) return Broadcast::kRow;
  throw DimensionError(std::string(op) + ": cannot combine " + shape_string(a.shape()) + " with " +
                       shape_string(b.shape()));
}

template <typename Scalar>
Matrix<Scalar> reduce_to(const Matrix<Scalar>& g, Broadcast kind) {
  switch (kind) {
    case Broadcast::kRow: return g.colwise().sum();
    case Broadcast::kScalar: return Matrix<Scalar>::Constant(1, 1, g.sum());
    case Broadcast::kNone: break;
  }
  return g;
}

template <typename Scalar>
Matrix<Scalar> expand(const Matrix<Scalar>& b, Index rows, Index cols, Broadcast kind) {
  switch (kind) {
    case Broadcast::kRow: return b.replicate(rows, 1);
    case Broadcast::kScalar: return Matrix<Scalar>::Constant(rows, cols, b(0, 0));
    case Broadcast::kNone: break;
  }
  return b;
}

}  // namespace detail

template <typename Scalar>
Tensor<Scalar> matmul(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  Matrix<Scalar> out = a.value() * b.value();
  return Tensor<Scalar>::make_result(std::move(out), {a.node(), b.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    auto& y = *self.parents[1];
    if (x.requires_grad) x.accumulate(self.grad * y.value.transpose());
    if (y.requires_grad) y.accumulate(x.value.transpose() * self.grad);
  });
}

// Elementwise sum; `b` may also be a row vector or a scalar broadcast over `a`.
template <typename Scalar>
Tensor<Scalar> operator+(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  const auto kind = detail::broadcast_kind(a, b, "add");
  Matrix<Scalar> out = a.value() + detail::expand(b.value(), a.rows(), a.cols(), kind);
  return Tensor<Scalar>::make_result(std::move(out), {a.node(), b.node()}, [kind](auto& self) {
    self.parents[0]->accumulate(self.grad);
    self.parents[1]->accumulate(detail::reduce_to<Scalar>(self.grad, kind));
  });
}

template <typename Scalar>
Tensor<Scalar> operator-(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  const auto kind = detail::broadcast_kind(a, b, "sub");
  Matrix<Scalar> out = a.value() - detail::expand(b.value(), a.rows(), a.cols(), kind);
  return Tensor<Scalar>::make_result(std::move(out), {a.node(), b.node()}, [kind](auto& self) {
    self.parents[0]->accumulate(self.grad);
    self.parents[1]->accumulate(-detail::reduce_to<Scalar>(self.grad, kind));
  });
}

// Elementwise (Hadamard) product.
template <typename Scalar>
Tensor<Scalar> operator*(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  const auto kind = detail::broadcast_kind(a, b, "mul");
  Matrix<Scalar> bb = detail::expand(b.value(), a.rows(), a.cols(), kind);
  Matrix<Scalar> out = a.value().cwiseProduct(bb);
  return Tensor<Scalar>::make_result(std::move(out), {a.node(), b.node()},
                                     [kind, bb = std::move(bb)](auto& self) {
                                       auto& x = *self.parents[0];
                                       auto& y = *self.parents[1];
                                       if (x.requires_grad) x.accumulate(self.grad.cwiseProduct(bb));
                                       if (y.requires_grad) {
                                         Matrix<Scalar> g = self.grad.cwiseProduct(x.value);
                                         y.accumulate(detail::reduce_to<Scalar>(g, kind));
                                       }
                                     });
}

template <typename Scalar>
Tensor<Scalar> operator*(Scalar s, const Tensor<Scalar>& a) {
  Matrix<Scalar> out = s * a.value();
  return Tensor<Scalar>::make_result(std::move(out), {a.node()},
                                     [s](auto& self) { self.parents[0]->accumulate(s * self.grad); });
}

template <typename Scalar>
Tensor<Scalar> operator-(const Tensor<Scalar>& a) {
  return Scalar(-1) * a;
}

template <typename Scalar>
Tensor<Scalar> relu(const Tensor<Scalar>& a) {
  Matrix<Scalar> out = a.value().cwiseMax(Scalar(0));
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    x.accumulate((x.value.array() > Scalar(0)).select(self.grad, Scalar(0)).matrix());
  });
}

template <typename Scalar>
Tensor<Scalar> leaky_relu(const Tensor<Scalar>& a, Scalar slope) {
  Matrix<Scalar> out = (a.value().array() > Scalar(0)).select(a.value(), slope * a.value());
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [slope](auto& self) {
    auto& x = *self.parents[0];
    x.accumulate((x.value.array() > Scalar(0)).select(self.grad, slope * self.grad).matrix());
  });
}

template <typename Scalar>
Matrix<Scalar> sigmoid_values(const Matrix<Scalar>& x) {
  return x.unaryExpr([](Scalar v) {
    // Split on sign so exp() never overflows.
    if (v >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-v));
    const Scalar e = std::exp(v);
    return e / (Scalar(1) + e);
  });
}

template <typename Scalar>
Tensor<Scalar> sigmoid(const Tensor<Scalar>& a) {
  Matrix<Scalar> out = sigmoid_values<Scalar>(a.value());
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [](auto& self) {
    const auto& s = self.value.array();
    self.parents[0]->accumulate((self.grad.array() * s * (Scalar(1) - s)).matrix());
  });
}

template <typename Scalar>
Tensor<Scalar> log(const Tensor<Scalar>& a) {
  Matrix<Scalar> out = a.value().array().log().matrix();
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    x.accumulate((self.grad.array() / x.value.array()).matrix());
  });
}

template <typename Scalar>
Tensor<Scalar> square(const Tensor<Scalar>& a) {
  Matrix<Scalar> out = a.value().array().square().matrix();
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    x.accumulate((Scalar(2) * self.grad.array() * x.value.array()).matrix());
  });
}

// Clamps into [lo, hi]; the gradient is zero where the clamp is active.
template <typename Scalar>
Tensor<Scalar> clamp(const Tensor<Scalar>& a, Scalar lo, Scalar hi) {
  Matrix<Scalar> out = a.value().cwiseMax(lo).cwiseMin(hi);
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [lo, hi](auto& self) {
    auto& x = *self.parents[0];
    const auto inside = (x.value.array() >= lo) && (x.value.array() <= hi);
    x.accumulate(inside.select(self.grad, Scalar(0)).matrix());
  });
}

template <typename Scalar>
Tensor<Scalar> sum(const Tensor<Scalar>& a) {
  Matrix<Scalar> out = Matrix<Scalar>::Constant(1, 1, a.value().sum());
  auto t = Tensor<Scalar>::make_result(std::move(out), {a.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    x.accumulate(Matrix<Scalar>::Constant(x.value.rows(), x.value.cols(), self.grad(0, 0)));
  });
  return t;
}

template <typename Scalar>
Tensor<Scalar> mean(const Tensor<Scalar>& a) {
  if (a.size() == 0) throw ContractError("mean() of an empty tensor");
  return (Scalar(1) / static_cast<Scalar>(a.size())) * sum(a);
}

// Picks a(i, columns[i]) for every row i; result is rows x 1.
template <typename Scalar>
Tensor<Scalar> gather_columns(const Tensor<Scalar>& a, std::span<const int> columns) {
  if (static_cast<Index>(columns.size()) != a.rows()) {
    throw DimensionError("gather_columns: " + std::to_string(columns.size()) + " indices for " +
                         std::to_string(a.rows()) + " rows");
  }
  Matrix<Scalar> out(a.rows(), 1);
  std::vector<int> idx(columns.begin(), columns.end());
  for (Index i = 0; i < a.rows(); ++i) {
    if (idx[i] < 0 || idx[i] >= a.cols()) throw DimensionError("gather_columns: index out of range");
    out(i, 0) = a.value()(i, idx[i]);
  }
  return Tensor<Scalar>::make_result(std::move(out), {a.node()}, [idx = std::move(idx)](auto& self) {
    auto& x = *self.parents[0];
    Matrix<Scalar> g = Matrix<Scalar>::Zero(x.value.rows(), x.value.cols());
    for (Index i = 0; i < g.rows(); ++i) g(i, idx[i]) = self.grad(i, 0);
    x.accumulate(g);
  });
}

// Dueling aggregation. Input column 0 is V(s), columns 1..k are A(s, a);
// output is V + A - mean_a A, shape rows x k.
template <typename Scalar>
Matrix<Scalar> dueling_values(const Matrix<Scalar>& head) {
  const Index k = head.cols() - 1;
  Matrix<Scalar> adv = head.rightCols(k);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> shift = head.col(0) - adv.rowwise().mean();
  adv.colwise() += shift;
  return adv;
}

template <typename Scalar>
Tensor<Scalar> dueling_combine(const Tensor<Scalar>& head) {
  if (head.cols() < 2) throw DimensionError("dueling head needs at least 2 columns");
  Matrix<Scalar> out = dueling_values<Scalar>(head.value());
  return Tensor<Scalar>::make_result(std::move(out), {head.node()}, [](auto& self) {
    auto& x = *self.parents[0];
    const Index k = self.grad.cols();
    Matrix<Scalar> g(x.value.rows(), k + 1);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sum = self.grad.rowwise().sum();
    g.col(0) = row_sum;
    g.rightCols(k) = self.grad;
    g.rightCols(k).colwise() -= row_sum / static_cast<Scalar>(k);
    x.accumulate(g);
  });
}

}  // namespace gaex

#endif  // GAEX_TENSOR_HPP_
