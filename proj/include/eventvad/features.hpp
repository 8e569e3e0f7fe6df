// Copyright 2026 The eventvad Authors.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eventvad/matrix.hpp"

namespace eventvad {

inline constexpr std::size_t kClipDim = 512;
inline constexpr std::size_t kFlowDim = 128;
inline constexpr std::size_t kFusedDim = kClipDim + kFlowDim;
inline constexpr double kNormGuard = 1e-12;
inline constexpr double kUnitNormTolerance = 1e-3;

// Per-frame semantic (clip) and motion (flow) features of one video, stored
// as the f32 values of the container, row-major.
struct FrameFeatures {
  std::string video_id;
  float fps = 30.0f;
  std::vector<float> clip;  // frames() * kClipDim
  std::vector<float> flow;  // frames() * kFlowDim

  std::size_t frames() const noexcept { return clip.size() / kClipDim; }

  std::span<const float> clip_row(std::size_t i) const {
    return {clip.data() + i * kClipDim, kClipDim};
  }
  std::span<const float> flow_row(std::size_t i) const {
    return {flow.data() + i * kFlowDim, kFlowDim};
  }
  std::span<float> clip_row(std::size_t i) {
    return {clip.data() + i * kClipDim, kClipDim};
  }
  std::span<float> flow_row(std::size_t i) {
    return {flow.data() + i * kFlowDim, kFlowDim};
  }

  friend bool operator==(const FrameFeatures&, const FrameFeatures&) = default;
};

// Checks every FrameFeatures invariant; throws Error naming the first
// offending field or frame.
void validate(const FrameFeatures& frames);

// Fused node features: row i is alpha * clip_i followed by (1 - alpha) * flow_i.
// The width is kFusedDim for fused streams; hand-built inputs may use any width.
struct FusedFeatures {
  Matrix vectors;
  double alpha = 0.75;

  std::size_t frames() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }
};

// Seeded 2 x kFlowDim projection of the spatial mean flow. Columns are
// L2-normalised standard-normal draws.
class FlowProjector {
 public:
  explicit FlowProjector(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  std::uint64_t seed_;
  Matrix matrix_;
};

std::vector<double> normalize_clip(std::span<const double> raw);

// P^T * mean_flow, where mean_flow = (mean dx, mean dy) of the backward flow.
std::vector<double> project_flow(std::span<const double, 2> mean_flow,
                                 const FlowProjector& projector);

FusedFeatures fuse(const FrameFeatures& frames, double alpha);

// .evf container I/O. The video id is the file stem.
FrameFeatures read_features(const std::filesystem::path& path);
void write_features(const FrameFeatures& frames,
                    const std::filesystem::path& path);

}  // namespace eventvad
