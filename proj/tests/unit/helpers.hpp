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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "eventvad/features.hpp"
#include "eventvad/matrix.hpp"
#include "eventvad/rng.hpp"

namespace eventvad::testing {

// Random valid FrameFeatures: unit clip rows, N(0, flow_scale^2) flow, zero
// flow at frame 0.
inline FrameFeatures random_features(std::size_t frames, std::uint64_t seed,
                                     double flow_scale = 0.5) {
  NormalSampler normal(seed);
  FrameFeatures f;
  f.video_id = "rand" + std::to_string(seed);
  f.clip.resize(frames * kClipDim);
  f.flow.resize(frames * kFlowDim);
  std::vector<double> raw(kClipDim);
  for (std::size_t t = 0; t < frames; ++t) {
    for (double& v : raw) v = normal();
    const auto unit = normalize_clip(raw);
    for (std::size_t c = 0; c < kClipDim; ++c) f.clip_row(t)[c] = static_cast<float>(unit[c]);
    for (std::size_t c = 0; c < kFlowDim; ++c) {
      f.flow_row(t)[c] = t == 0 ? 0.0f : static_cast<float>(flow_scale * normal());
    }
  }
  return f;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  NormalSampler normal(seed);
  Matrix m(rows, cols);
  for (double& v : m.data()) v = normal();
  return m;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("eventvad_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace eventvad::testing
