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

#include "eventvad/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "eventvad/error.hpp"

namespace eventvad {

std::vector<int> GroundTruth::labels() const {
  std::vector<int> out(total_frames, 0);
  for (const auto& r : anomalous_ranges) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(r.start),
              out.begin() + static_cast<std::ptrdiff_t>(r.end), 1);
  }
  return out;
}

namespace {

struct ClassCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
};

ClassCounts check_inputs(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kPrecondition, "scores and labels differ in length (" +
                                              std::to_string(scores.size()) + " vs " +
                                              std::to_string(labels.size()) + ")");
  }
  ClassCounts counts;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::isnan(scores[i])) throw Error(ErrorCode::kPrecondition, "NaN score");
    if (labels[i] != 0 && labels[i] != 1) throw Error(ErrorCode::kPrecondition, "labels must be 0/1");
    (labels[i] != 0 ? counts.positive : counts.negative) += 1;
  }
  return counts;
}

// Indices sorted by descending score; ties keep input order.
std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_inputs(scores, labels);
  if (counts.positive == 0 || counts.negative == 0) {
    throw Error(ErrorCode::kDegenerateLabels,
                "AUC needs both classes; got " + std::to_string(counts.positive) + " positive and " +
                    std::to_string(counts.negative) + " negative frames");
  }
  // Walk ascending tie groups; twice the pair credit stays an integer.
  std::vector<std::size_t> order = descending_order(scores);
  std::reverse(order.begin(), order.end());
  std::uint64_t doubled = 0;
  std::uint64_t negatives_below = 0;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t h = g;
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    while (h < order.size() && scores[order[h]] == scores[order[g]]) {
      (labels[order[h]] != 0 ? pos : neg) += 1;
      ++h;
    }
    doubled += 2 * pos * negatives_below + pos * neg;
    negatives_below += neg;
    g = h;
  }
  return static_cast<double>(doubled) /
         (2.0 * static_cast<double>(counts.positive) * static_cast<double>(counts.negative));
}

double average_precision(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_inputs(scores, labels);
  if (counts.positive == 0) {
    throw Error(ErrorCode::kDegenerateLabels, "AP needs at least one positive frame");
  }
  const auto order = descending_order(scores);
  const double total_pos = static_cast<double>(counts.positive);
  double ap = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t tp_prev = 0;
  std::size_t seen = 0;
  while (seen < order.size()) {
    const double threshold = scores[order[seen]];
    while (seen < order.size() && scores[order[seen]] == threshold) {
      tp += labels[order[seen]] != 0 ? 1 : 0;
      ++seen;
    }
    const double recall_step =
        static_cast<double>(tp) / total_pos - static_cast<double>(tp_prev) / total_pos;
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    ap += recall_step * precision;
    tp_prev = tp;
  }
  return ap;
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const auto counts = check_inputs(scores, labels);
  if (counts.positive == 0 || counts.negative == 0) {
    throw Error(ErrorCode::kDegenerateLabels, "ROC curve needs both classes");
  }
  const auto order = descending_order(scores);
  std::vector<RocPoint> points{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t seen = 0; seen < order.size();) {
    const double threshold = scores[order[seen]];
    while (seen < order.size() && scores[order[seen]] == threshold) {
      (labels[order[seen]] != 0 ? tp : fp) += 1;
      ++seen;
    }
    points.push_back({threshold, static_cast<double>(fp) / static_cast<double>(counts.negative),
                      static_cast<double>(tp) / static_cast<double>(counts.positive)});
  }
  return points;
}

std::string roc_csv(std::span<const RocPoint> points) {
  std::ostringstream out;
  out.precision(17);
  out << "threshold,fpr,tpr\n";
  for (const auto& p : points) {
    if (std::isinf(p.threshold)) {
      out << "inf";
    } else {
      out << p.threshold;
    }
    out << ',' << p.fpr << ',' << p.tpr << '\n';
  }
  return out.str();
}

BoundaryPrf boundary_prf(std::span<const std::size_t> predicted,
                         std::span<const std::size_t> truth, std::size_t tolerance) {
  if (predicted.empty() && truth.empty()) return {1.0, 1.0, 1.0};
  if (predicted.empty()) return {1.0, 0.0, 0.0};
  struct Pair {
    std::size_t distance, p, t;
  };
  std::vector<Pair> pairs;
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      const std::size_t d = predicted[p] > truth[t] ? predicted[p] - truth[t] : truth[t] - predicted[p];
      if (d <= tolerance) pairs.push_back({d, p, t});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.distance < b.distance; });
  std::vector<bool> used_p(predicted.size()), used_t(truth.size());
  std::size_t matched = 0;
  for (const auto& pair : pairs) {
    if (used_p[pair.p] || used_t[pair.t]) continue;
    used_p[pair.p] = used_t[pair.t] = true;
    ++matched;
  }
  BoundaryPrf prf;
  prf.precision = static_cast<double>(matched) / static_cast<double>(predicted.size());
  prf.recall = truth.empty() ? 1.0 : static_cast<double>(matched) / static_cast<double>(truth.size());
  prf.f1 = prf.precision + prf.recall > 0.0
               ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
               : 0.0;
  return prf;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::optional<std::size_t> parse_count(const std::string& field) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::map<std::string, GroundTruth> parse_annotations(const std::string& text,
                                                     const std::string& source) {
  std::map<std::string, GroundTruth> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](ErrorCode code, const std::string& message) {
    throw Error(code, source + ":" + std::to_string(line_no) + ": " + message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream row(stripped);
    for (std::string f; std::getline(row, f, ',');) fields.push_back(trim(f));
    if (fields.size() >= 2 && line_no == 1 && !parse_count(fields[1])) continue;  // header
    if (fields.size() != 2 && fields.size() != 4) {
      fail(ErrorCode::kParseError, "expected video_id,total_frames[,start,end], got " +
                                       std::to_string(fields.size()) + " fields");
    }
    if (fields[0].empty()) fail(ErrorCode::kParseError, "empty video_id");
    std::vector<std::size_t> numbers;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto value = parse_count(fields[i]);
      if (!value) fail(ErrorCode::kParseError, "'" + fields[i] + "' is not a non-negative integer");
      numbers.push_back(*value);
    }
    auto [it, inserted] = out.try_emplace(fields[0]);
    GroundTruth& gt = it->second;
    if (inserted) {
      gt.video_id = fields[0];
      gt.total_frames = numbers[0];
    } else if (gt.total_frames != numbers[0]) {
      fail(ErrorCode::kParseError, "video " + fields[0] + " listed with total_frames " +
                                       std::to_string(numbers[0]) + " and " +
                                       std::to_string(gt.total_frames));
    }
    if (numbers[0] == 0) fail(ErrorCode::kParseError, "total_frames must be positive");
    if (numbers.size() == 3) {
      const FrameRange r{numbers[1], numbers[2]};
      if (r.start >= r.end || r.end > gt.total_frames) {
        fail(ErrorCode::kRangeOutOfBounds, "range [" + std::to_string(r.start) + "," +
                                               std::to_string(r.end) + ") not within [0," +
                                               std::to_string(gt.total_frames) + ")");
      }
      for (const auto& other : gt.anomalous_ranges) {
        if (r.start < other.end && other.start < r.end) {
          fail(ErrorCode::kOverlappingRanges,
               "range [" + std::to_string(r.start) + "," + std::to_string(r.end) + ") overlaps [" +
                   std::to_string(other.start) + "," + std::to_string(other.end) + ")");
        }
      }
      gt.anomalous_ranges.push_back(r);
    }
  }
  for (auto& [id, gt] : out) {
    auto& ranges = gt.anomalous_ranges;
    std::sort(ranges.begin(), ranges.end(),
              [](const FrameRange& a, const FrameRange& b) { return a.start < b.start; });
    std::vector<FrameRange> merged;
    for (const auto& r : ranges) {
      if (!merged.empty() && merged.back().end == r.start) {
        merged.back().end = r.end;
      } else {
        merged.push_back(r);
      }
    }
    ranges = std::move(merged);
  }
  return out;
}

std::map<std::string, GroundTruth> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadPath, "cannot open annotations " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_annotations(text.str(), path.string());
}

MetricReport evaluate_corpus(const std::map<std::string, std::vector<double>>& frame_scores,
                             const std::map<std::string, GroundTruth>& truth) {
  if (frame_scores.empty()) throw Error(ErrorCode::kNoResults, "no scored videos to evaluate");
  MetricReport report;
  std::vector<double> all_scores;
  std::vector<int> all_labels;
  for (const auto& [id, scores] : frame_scores) {
    const auto gt = truth.find(id);
    if (gt == truth.end()) {
      throw Error(ErrorCode::kPrecondition, "video " + id + " has no annotation");
    }
    if (gt->second.total_frames != scores.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "video " + id + ": annotation has " + std::to_string(gt->second.total_frames) +
                      " frames, result has " + std::to_string(scores.size()));
    }
    const auto labels = gt->second.labels();
    VideoMetrics m;
    m.n_frames = labels.size();
    m.n_positive = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (m.n_positive > 0 && m.n_positive < m.n_frames) {
      m.auc = auc_roc(scores, labels);
      m.ap = average_precision(scores, labels);
    }
    report.per_video[id] = m;
    all_scores.insert(all_scores.end(), scores.begin(), scores.end());
    all_labels.insert(all_labels.end(), labels.begin(), labels.end());
  }
  report.n_frames = all_labels.size();
  report.n_positive = static_cast<std::size_t>(std::count(all_labels.begin(), all_labels.end(), 1));
  report.auc = auc_roc(all_scores, all_labels);
  report.ap = average_precision(all_scores, all_labels);
  return report;
}

nlohmann::ordered_json to_json(const MetricReport& report) {
  nlohmann::ordered_json out;
  out["auc"] = report.auc;
  out["ap"] = report.ap;
  out["n_frames"] = report.n_frames;
  out["n_positive"] = report.n_positive;
  auto per_video = nlohmann::ordered_json::object();
  for (const auto& [id, m] : report.per_video) {
    nlohmann::ordered_json v;
    v["auc"] = m.auc ? nlohmann::ordered_json(*m.auc) : nlohmann::ordered_json(nullptr);
    v["ap"] = m.ap ? nlohmann::ordered_json(*m.ap) : nlohmann::ordered_json(nullptr);
    v["n_frames"] = m.n_frames;
    v["n_positive"] = m.n_positive;
    per_video[id] = std::move(v);
  }
  out["per_video"] = std::move(per_video);
  return out;
}

}  // namespace eventvad
