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

#include "gaex/abstraction.hpp"

#include <string>

#include "gaex/errors.hpp"

namespace gaex {

Plane rescale(const Plane& plane, int rows, int cols) {
  const Index src_rows = plane.rows();
  const Index src_cols = plane.cols();
  if (rows <= 0 || cols <= 0 || rows > src_rows || cols > src_cols) {
    throw ContractError("rescale: cannot map " + std::to_string(src_rows) + "x" + std::to_string(src_cols) + " to " +
                        std::to_string(rows) + "x" + std::to_string(cols));
  }
  Plane out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Index r0 = r * src_rows / rows;
    const Index r1 = (r + 1) * src_rows / rows;
    for (int c = 0; c < cols; ++c) {
      const Index c0 = c * src_cols / cols;
      const Index c1 = (c + 1) * src_cols / cols;
      out(r, c) = plane.block(r0, c0, r1 - r0, c1 - c0).mean();
    }
  }
  return out;
}

AbstractFeature abstract_pixels(const PixelObservation& obs) {
  constexpr int kSize = PixelObservation::kSize;
  for (const auto& f : obs.frames) {
    if (f.rows() != kSize || f.cols() != kSize) throw DimensionError("pixel frames must be 84x84");
  }
  const Plane thumb = rescale(obs.frames[0], kThumbnailSize, kThumbnailSize);

  Plane dynamics = Plane::Zero(kSize, kSize);
  for (int i = 1; i < PixelObservation::kFrames; ++i) {
    dynamics = kDynamicsDecay * dynamics + (obs.frames[i] - obs.frames[i - 1]);
  }
  const Plane small = rescale(dynamics, kDynamicsSize, kDynamicsSize);

  AbstractFeature out;
  out.source = FeatureSource::kPixel;
  out.vector.resize(kPixelFeatureDim);
  out.vector.head(kThumbnailSize * kThumbnailSize) = thumb.reshaped<Eigen::RowMajor>();
  out.vector.segment(kThumbnailSize * kThumbnailSize, kDynamicsSize) = small.rowwise().mean();
  out.vector.tail(kDynamicsSize) = small.colwise().mean().transpose();
  out.vector /= kFeatureScale;
  return out;
}

AbstractFeature abstract_direct(const Vector& obs) {
  if (!obs.allFinite()) throw ContractError("abstract_direct: observation has non-finite entries");
  return AbstractFeature{obs, FeatureSource::kDirect};
}

AbstractFeature abstract_direct(const AbstractFeature& feature) { return abstract_direct(feature.vector); }

}  // namespace gaex
