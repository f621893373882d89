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

#ifndef GAEX_TYPES_HPP_
#define GAEX_TYPES_HPP_

#include <Eigen/Dense>

#include "gaex/tensor.hpp"

namespace gaex {

// The concrete scalar used outside the templated numerical core.
using Real = double;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
// Batches: one sample per row.
using Batch = Matrix<Real>;
// Grayscale image plane, row-major.
using Plane = Matrix<Real>;

}  // namespace gaex

#endif  // GAEX_TYPES_HPP_
