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

// Fixed state abstraction: stacked pixel frames to a 148-d feature, and an
// identity pass-through for observations that are already compact.

#ifndef GAEX_ABSTRACTION_HPP_
#define GAEX_ABSTRACTION_HPP_

#include "gaex/envs.hpp"
#include "gaex/types.hpp"

namespace gaex {

enum class FeatureSource { kPixel, kDirect };

struct AbstractFeature {
  Vector vector;
  FeatureSource source = FeatureSource::kDirect;
};

inline constexpr int kThumbnailSize = 8;       // first frame -> 8x8
inline constexpr int kDynamicsSize = 42;       // accumulated differences -> 42x42
inline constexpr double kDynamicsDecay = 0.8;  // d := 0.8 d + (f[i] - f[i-1])
inline constexpr double kFeatureScale = 10.0;
inline constexpr int kPixelFeatureDim = kThumbnailSize * kThumbnailSize + 2 * kDynamicsSize;  // 148

// Area-average downsampling. Output pixel (r, c) is the mean of source rows
// [floor(r*H/h), floor((r+1)*H/h)) and the analogous column range.
Plane rescale(const Plane& plane, int rows, int cols);

AbstractFeature abstract_pixels(const PixelObservation& obs);
AbstractFeature abstract_direct(const Vector& obs);
// Idempotent on features that are already direct.
AbstractFeature abstract_direct(const AbstractFeature& feature);

}  // namespace gaex

#endif  // GAEX_ABSTRACTION_HPP_
