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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace eventvad {

struct FrameRange {
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  bool operator==(const FrameRange&) const = default;
};

struct GroundTruth {
  std::string video_id;
  std::size_t total_frames = 0;
  std::vector<FrameRange> anomalous_ranges;  // sorted, disjoint, non-adjacent

  std::vector<int> labels() const;
};

// Mann-Whitney AUC with tied pairs credited 0.5. Throws kDegenerateLabels
// when only one class is present, kPrecondition on length mismatch.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

// Sum over distinct-score thresholds (descending) of (R_k - R_{k-1}) * P_k.
double average_precision(std::span<const double> scores, std::span<const int> labels);

struct RocPoint {
  double threshold;
  double fpr;
  double tpr;
};

// One point per distinct score, plus the (inf, 0, 0) origin.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
std::string roc_csv(std::span<const RocPoint> points);

struct BoundaryPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Greedy one-to-one matching in order of distance; a prediction matches a
// truth index within +-tolerance frames.
BoundaryPrf boundary_prf(std::span<const std::size_t> predicted,
                         std::span<const std::size_t> truth, std::size_t tolerance);

// CSV rows `video_id,total_frames[,start,end]`; an optional header line whose
// second field is not an integer is skipped.
std::map<std::string, GroundTruth> read_annotations(const std::filesystem::path& path);
std::map<std::string, GroundTruth> parse_annotations(const std::string& text,
                                                     const std::string& source = "<memory>");

struct VideoMetrics {
  std::size_t n_frames = 0;
  std::size_t n_positive = 0;
  std::optional<double> auc;  // empty for single-class videos
  std::optional<double> ap;
};

struct MetricReport {
  double auc = 0.0;
  double ap = 0.0;
  std::size_t n_frames = 0;
  std::size_t n_positive = 0;
  std::map<std::string, VideoMetrics> per_video;
};

// Corpus metrics over the concatenation of all videos' frames (in video_id
// order). Each scored video must have an annotation with matching length.
MetricReport evaluate_corpus(const std::map<std::string, std::vector<double>>& frame_scores,
                             const std::map<std::string, GroundTruth>& truth);

nlohmann::ordered_json to_json(const MetricReport& report);

}  // namespace eventvad
