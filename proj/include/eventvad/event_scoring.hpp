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

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "eventvad/error.hpp"

namespace eventvad {

inline constexpr std::size_t kFramesPerEvent = 16;
inline constexpr std::string_view kUnparseable = "UNPARSEABLE";

struct EventUnit {
  std::size_t index = 0;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive
  std::vector<std::size_t> sampled_frames;

  std::size_t length() const noexcept { return end - start; }
};

struct EventScore {
  std::string description;
  double score = 0.0;
  std::size_t attempts = 0;
  bool unparseable = false;
};

struct ScoredEvent {
  EventUnit unit;
  EventScore score;
};

// min(count, end - start) frame indices, one from the middle of each of the
// equal-width bins of [start, end).
std::vector<std::size_t> sample_frames(std::size_t start, std::size_t end,
                                       std::size_t count = kFramesPerEvent);

// Events [0, b1), [b1, b2), ..., [bm, frames).
std::vector<EventUnit> events_from_boundaries(std::size_t frames,
                                              std::span<const std::size_t> boundaries);

// ---- scorer protocol -------------------------------------------------------

struct DescribeRequest {
  std::string video_id;
  std::size_t event_index = 0;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;
  std::vector<std::string> frames;  // base64 JPEG, one per sampled frame
  std::string prompt;
};

struct ScoreRequest {
  std::string video_id;
  std::size_t event_index = 0;
  std::string description;
  std::string prompt;
};

nlohmann::ordered_json to_json(const DescribeRequest& request);
nlohmann::ordered_json to_json(const ScoreRequest& request);

// Two-stage describe-then-score backend. Implementations throw
// Error(kScorerUnavailable) on transport failure and must be callable from
// several threads at once.
class Scorer {
 public:
  virtual ~Scorer() = default;
  // Stage 1: free-text description of the sampled frames.
  virtual std::string describe(const DescribeRequest& request) = 0;
  // Stage 2: raw reply that should contain the anomaly score.
  virtual std::string score(const ScoreRequest& request) = 0;
};

std::string prompt_version();
std::string describe_prompt();
// Stage-2 prompt with the stage-1 description embedded verbatim.
std::string score_prompt(std::string_view description);

// First decimal number in the reply, if any.
std::optional<double> parse_score(std::string_view reply);

// Resolves sampled frame indices to encoded images.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<std::string> jpeg(std::size_t frame) const = 0;
};

// Frames stored as <dir>/<frame:06d>.jpg, zero-based.
class DirectoryFrameSource final : public FrameSource {
 public:
  explicit DirectoryFrameSource(std::filesystem::path dir);
  std::optional<std::string> jpeg(std::size_t frame) const override;

 private:
  std::filesystem::path dir_;
};

std::string base64_encode(std::string_view bytes);

// Counting limit on scorer requests in flight; may be shared across videos.
class InflightLimiter {
 public:
  explicit InflightLimiter(std::size_t limit);
  void acquire();
  void release();
  std::size_t limit() const noexcept { return limit_; }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t limit_;
  std::size_t active_ = 0;
};

struct ScoringOptions {
  std::size_t max_retries = 3;
  std::size_t inflight = 4;
};

EventScore score_event(std::string_view video_id, const EventUnit& event,
                       const FrameSource* frames, Scorer& scorer, const ScoringOptions& options);

// Raised when the scorer becomes unreachable part-way through a video.
class PartialScoringError : public Error {
 public:
  PartialScoringError(const std::string& message, std::vector<ScoredEvent> completed)
      : Error(ErrorCode::kScorerUnavailable, message), completed_(std::move(completed)) {}

  const std::vector<ScoredEvent>& completed() const noexcept { return completed_; }

 private:
  std::vector<ScoredEvent> completed_;
};

// Scores all events with at most options.inflight concurrent requests (and
// within `shared` when given). Results are ordered by event index.
std::vector<ScoredEvent> score_events(std::string_view video_id, std::span<const EventUnit> events,
                                      const FrameSource* frames, Scorer& scorer,
                                      const ScoringOptions& options,
                                      InflightLimiter* shared = nullptr);

// Piecewise-constant frame scores; throws Error(kPrecondition) unless the
// events tile [0, frames).
std::vector<double> assemble_frame_scores(std::span<const ScoredEvent> events, std::size_t frames);

// ---- results ---------------------------------------------------------------

struct DetectionResult {
  std::string video_id;
  double fps = 0.0;
  nlohmann::ordered_json config;
  nlohmann::ordered_json seeds;
  std::vector<ScoredEvent> events;
  std::vector<double> frame_scores;
};

std::string to_json(const DetectionResult& result);
// Reads the fields needed for evaluation (video_id, fps, events, frame scores).
DetectionResult detection_result_from_json(const std::string& text);

// ---- mock scorer -----------------------------------------------------------

// Deterministic in-process scorer: fixture scores keyed by [start, end),
// `default_score` otherwise. Tracks the peak number of concurrent calls.
class MockScorer final : public Scorer {
 public:
  explicit MockScorer(double default_score = 0.5) : default_score_(default_score) {}

  void set_fixture(std::size_t start, std::size_t end, double score) {
    fixture_[{start, end}] = score;
  }
  // Fixture file: {"default": 0.5, "events": [{"start":0,"end":40,"score":0.9}, ...]}.
  void load_fixture(const std::filesystem::path& path);
  // Each call sleeps this long while counted as in flight.
  void set_call_delay_ms(int ms) { delay_ms_ = ms; }

  std::string describe(const DescribeRequest& request) override;
  std::string score(const ScoreRequest& request) override;

  std::size_t max_in_flight() const noexcept { return max_in_flight_.load(); }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  void enter();
  void leave();

  double default_score_;
  std::map<std::pair<std::size_t, std::size_t>, double> fixture_;
  // Event ranges by (video, index), recorded at stage 1 for stage-2 lookups.
  mutable std::mutex ranges_mutex_;
  std::map<std::pair<std::string, std::size_t>, std::pair<std::size_t, std::size_t>> ranges_;
  int delay_ms_ = 0;
  std::atomic<std::size_t> in_flight_{0};
  std::atomic<std::size_t> max_in_flight_{0};
  std::atomic<std::size_t> calls_{0};
};

}  // namespace eventvad
