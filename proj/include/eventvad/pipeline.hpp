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

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "eventvad/boundary_detector.hpp"
#include "eventvad/config.hpp"
#include "eventvad/dynamic_graph.hpp"
#include "eventvad/event_scoring.hpp"
#include "eventvad/features.hpp"
#include "eventvad/graph_attention.hpp"

namespace eventvad {

// Projections keyed by (seed, k, d), built once and shared between videos
// and sweep cells. Thread-safe.
class ProjectionCache {
 public:
  std::shared_ptr<const Projections> get(const AttentionConfig& cfg);

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::uint64_t, std::size_t, std::size_t>, std::shared_ptr<const Projections>>
      entries_;
};

struct Segmentation {
  FusedFeatures fused;
  DynamicGraph graph;
  PropagatedFeatures propagated;
  BoundarySignal signal;
};

// fuse -> build_graph -> propagate -> detect_boundaries.
Segmentation segment(const FrameFeatures& frames, const RunConfig& cfg, ProjectionCache& cache);

// Mock (optionally with fixture) or HTTP scorer per the config; throws
// Error(kInvalidConfig) when neither is configured.
std::unique_ptr<Scorer> make_scorer(const RunConfig& cfg);

// Events from the segmentation, scored and assembled into a result with the
// config and seeds embedded.
DetectionResult detect(const FrameFeatures& frames, const Segmentation& segmentation,
                       const RunConfig& cfg, Scorer& scorer, const FrameSource* media,
                       InflightLimiter* shared = nullptr);

}  // namespace eventvad
