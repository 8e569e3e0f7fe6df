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

#include "eventvad/pipeline.hpp"

#include "eventvad/http_scorer.hpp"

namespace eventvad {

std::shared_ptr<const Projections> ProjectionCache::get(const AttentionConfig& cfg) {
  const auto key = std::make_tuple(cfg.seed, cfg.k, cfg.d);
  std::lock_guard lock(mutex_);
  auto& slot = entries_[key];
  if (!slot) slot = std::make_shared<const Projections>(make_projections(cfg));
  return slot;
}

Segmentation segment(const FrameFeatures& frames, const RunConfig& cfg, ProjectionCache& cache) {
  cfg.validate();
  Segmentation out;
  out.fused = fuse(frames, cfg.alpha);
  out.graph = build_graph(frames, cfg.graph());
  const AttentionConfig attention = cfg.attention();
  out.propagated = propagate(out.fused, out.graph, attention, *cache.get(attention));
  out.signal = detect_boundaries(out.propagated, cfg.boundary());
  return out;
}

std::unique_ptr<Scorer> make_scorer(const RunConfig& cfg) {
  if (cfg.mock_scorer) {
    auto mock = std::make_unique<MockScorer>();
    if (!cfg.mock_fixture.empty()) mock->load_fixture(cfg.mock_fixture);
    return mock;
  }
  if (!cfg.scorer_url.empty()) return std::make_unique<HttpScorer>(cfg.scorer_url);
  throw Error(ErrorCode::kInvalidConfig,
              std::string("no scorer configured; pass --scorer-url, --mock-scorer or set ") +
                  kScorerUrlEnv);
}

DetectionResult detect(const FrameFeatures& frames, const Segmentation& segmentation,
                       const RunConfig& cfg, Scorer& scorer, const FrameSource* media,
                       InflightLimiter* shared) {
  const auto events = events_from_boundaries(frames.frames(), segmentation.signal.boundaries);
  ScoringOptions options;
  options.max_retries = cfg.max_retries;
  options.inflight = cfg.inflight;
  DetectionResult result;
  result.video_id = frames.video_id;
  result.fps = frames.fps;
  result.config = to_json(cfg);
  result.seeds = seeds_json(cfg);
  result.events = score_events(frames.video_id, events, media, scorer, options, shared);
  result.frame_scores = assemble_frame_scores(result.events, frames.frames());
  return result;
}

}  // namespace eventvad
