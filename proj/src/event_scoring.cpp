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

#include "eventvad/event_scoring.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <thread>

#include "prompts.hpp"

namespace eventvad {

std::vector<std::size_t> sample_frames(std::size_t start, std::size_t end, std::size_t count) {
  if (end <= start || count == 0) return {};
  const std::size_t len = end - start;
  const std::size_t n = std::min(count, len);
  std::vector<std::size_t> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = start + (2 * j + 1) * len / (2 * n);
  return out;
}

std::vector<EventUnit> events_from_boundaries(std::size_t frames,
                                              std::span<const std::size_t> boundaries) {
  std::vector<EventUnit> events;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= boundaries.size(); ++i) {
    const std::size_t end = i < boundaries.size() ? boundaries[i] : frames;
    if (end <= start || end > frames) {
      throw Error(ErrorCode::kPrecondition, "boundaries must be strictly increasing within [1, T-1]");
    }
    events.push_back({i, start, end, sample_frames(start, end)});
    start = end;
  }
  return events;
}

nlohmann::ordered_json to_json(const DescribeRequest& request) {
  nlohmann::ordered_json out;
  out["video_id"] = request.video_id;
  out["event_index"] = request.event_index;
  out["start_frame"] = request.start_frame;
  out["end_frame"] = request.end_frame;
  out["frames"] = request.frames;
  out["prompt"] = request.prompt;
  return out;
}

nlohmann::ordered_json to_json(const ScoreRequest& request) {
  nlohmann::ordered_json out;
  out["video_id"] = request.video_id;
  out["event_index"] = request.event_index;
  out["description"] = request.description;
  out["prompt"] = request.prompt;
  return out;
}

std::string prompt_version() { return prompts::kVersion; }

std::string describe_prompt() { return prompts::kDescribe; }

std::string score_prompt(std::string_view description) {
  std::string text = prompts::kScore;
  const auto slot = text.find("<D>");
  if (slot != std::string::npos) text.replace(slot, 3, description);
  return text;
}

std::optional<double> parse_score(std::string_view reply) {
  static const std::regex number(R"([-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)");
  const std::string text(reply);
  std::smatch match;
  if (!std::regex_search(text, match, number)) return std::nullopt;
  const std::string token = match.str();
  double value = 0.0;
  const char* first = token.data() + (token.front() == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
  if (ec != std::errc() || !std::isfinite(value)) return std::nullopt;
  return value;
}

DirectoryFrameSource::DirectoryFrameSource(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::kBadPath, "media directory " + dir_.string() + " does not exist");
  }
}

std::optional<std::string> DirectoryFrameSource::jpeg(std::size_t frame) const {
  char name[32];
  std::snprintf(name, sizeof(name), "%06zu.jpg", frame);
  std::ifstream in(dir_ / name, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

InflightLimiter::InflightLimiter(std::size_t limit) : limit_(std::max<std::size_t>(limit, 1)) {}

void InflightLimiter::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return active_ < limit_; });
  ++active_;
}

void InflightLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    --active_;
  }
  cv_.notify_one();
}

namespace {

template <typename Call>
auto with_transport_retries(std::size_t max_retries, Call&& call) {
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      return call();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kScorerUnavailable || attempt >= max_retries) throw;
    }
  }
}

}  // namespace

EventScore score_event(std::string_view video_id, const EventUnit& event, const FrameSource* frames,
                       Scorer& scorer, const ScoringOptions& options) {
  DescribeRequest describe;
  describe.video_id = video_id;
  describe.event_index = event.index;
  describe.start_frame = event.start;
  describe.end_frame = event.end;
  describe.prompt = describe_prompt();
  if (frames != nullptr) {
    for (std::size_t f : event.sampled_frames) {
      if (auto bytes = frames->jpeg(f)) describe.frames.push_back(base64_encode(*bytes));
    }
  }
  const std::string description =
      with_transport_retries(options.max_retries, [&] { return scorer.describe(describe); });

  ScoreRequest request;
  request.video_id = video_id;
  request.event_index = event.index;
  request.description = description;
  request.prompt = score_prompt(description);

  EventScore result;
  const std::size_t budget = options.max_retries + 1;
  for (std::size_t attempt = 1; attempt <= budget; ++attempt) {
    result.attempts = attempt;
    const std::string reply = scorer.score(request);
    if (const auto value = parse_score(reply)) {
      result.description = description;
      result.score = std::clamp(*value, 0.0, 1.0);
      return result;
    }
  }
  result.description = kUnparseable;
  result.score = 0.5;
  result.unparseable = true;
  return result;
}

std::vector<ScoredEvent> score_events(std::string_view video_id, std::span<const EventUnit> events,
                                      const FrameSource* frames, Scorer& scorer,
                                      const ScoringOptions& options, InflightLimiter* shared) {
  const std::size_t n = events.size();
  std::vector<std::optional<EventScore>> scores(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      if (shared != nullptr) shared->acquire();
      try {
        scores[i] = score_event(video_id, events[i], frames, scorer, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
      }
      if (shared != nullptr) shared->release();
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(options.inflight, 1), n);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::vector<ScoredEvent> done;
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i]) done.push_back({events[i], std::move(*scores[i])});
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kScorerUnavailable) throw PartialScoringError(e.detail(), std::move(done));
      throw;
    }
  }
  return done;
}

std::vector<double> assemble_frame_scores(std::span<const ScoredEvent> events, std::size_t frames) {
  std::vector<double> out(frames, 0.0);
  std::size_t cursor = 0;
  for (const auto& e : events) {
    if (e.unit.start != cursor || e.unit.end <= e.unit.start || e.unit.end > frames) {
      throw Error(ErrorCode::kPrecondition, "events do not tile [0, T): gap or overlap at frame " +
                                                std::to_string(cursor));
    }
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(e.unit.start),
              out.begin() + static_cast<std::ptrdiff_t>(e.unit.end), e.score.score);
    cursor = e.unit.end;
  }
  if (cursor != frames) {
    throw Error(ErrorCode::kPrecondition, "events end at frame " + std::to_string(cursor) +
                                              " but the video has " + std::to_string(frames));
  }
  return out;
}

std::string to_json(const DetectionResult& result) {
  nlohmann::ordered_json out;
  out["video_id"] = result.video_id;
  out["fps"] = result.fps;
  out["config"] = result.config;
  out["seeds"] = result.seeds;
  auto events = nlohmann::ordered_json::array();
  std::vector<std::size_t> unparseable;
  for (const auto& e : result.events) {
    nlohmann::ordered_json item;
    item["index"] = e.unit.index;
    item["start"] = e.unit.start;
    item["end"] = e.unit.end;
    item["score"] = e.score.score;
    item["description"] = e.score.description;
    events.push_back(std::move(item));
    if (e.score.unparseable) unparseable.push_back(e.unit.index);
  }
  out["events"] = std::move(events);
  out["frame_scores"] = result.frame_scores;
  out["unparseable_events"] = unparseable;
  return out.dump(2) + "\n";
}

DetectionResult detection_result_from_json(const std::string& text) {
  DetectionResult result;
  try {
    const auto doc = nlohmann::ordered_json::parse(text);
    result.video_id = doc.at("video_id").get<std::string>();
    result.fps = doc.at("fps").get<double>();
    if (doc.contains("config")) result.config = doc.at("config");
    if (doc.contains("seeds")) result.seeds = doc.at("seeds");
    for (const auto& item : doc.at("events")) {
      ScoredEvent e;
      e.unit.index = item.at("index").get<std::size_t>();
      e.unit.start = item.at("start").get<std::size_t>();
      e.unit.end = item.at("end").get<std::size_t>();
      e.score.score = item.at("score").get<double>();
      e.score.description = item.at("description").get<std::string>();
      e.score.unparseable = e.score.description == kUnparseable;
      result.events.push_back(std::move(e));
    }
    result.frame_scores = doc.at("frame_scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("detection result: ") + e.what());
  }
  return result;
}

void MockScorer::load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadPath, "cannot open mock fixture " + path.string());
  try {
    const auto doc = nlohmann::json::parse(in);
    if (doc.contains("default")) default_score_ = doc.at("default").get<double>();
    for (const auto& item : doc.value("events", nlohmann::json::array())) {
      set_fixture(item.at("start").get<std::size_t>(), item.at("end").get<std::size_t>(),
                  item.at("score").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

void MockScorer::enter() {
  const std::size_t now = ++in_flight_;
  std::size_t peak = max_in_flight_.load();
  while (now > peak && !max_in_flight_.compare_exchange_weak(peak, now)) {
  }
  ++calls_;
  if (delay_ms_ > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));
}

void MockScorer::leave() { --in_flight_; }

std::string MockScorer::describe(const DescribeRequest& request) {
  enter();
  {
    std::lock_guard lock(ranges_mutex_);
    ranges_[{request.video_id, request.event_index}] = {request.start_frame, request.end_frame};
  }
  std::ostringstream text;
  text << "mock description of frames [" << request.start_frame << ", " << request.end_frame << ")";
  leave();
  return text.str();
}

std::string MockScorer::score(const ScoreRequest& request) {
  enter();
  double value = default_score_;
  {
    std::lock_guard lock(ranges_mutex_);
    const auto range = ranges_.find({request.video_id, request.event_index});
    if (range != ranges_.end()) {
      const auto hit = fixture_.find(range->second);
      if (hit != fixture_.end()) value = hit->second;
    }
  }
  std::ostringstream text;
  text.precision(17);
  text << value;
  leave();
  return text.str();
}

}  // namespace eventvad
