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

#include "eventvad/boundary_detector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "eventvad/error.hpp"
#include "eventvad/kernels.hpp"

namespace eventvad {
namespace {

constexpr double kRatioGuard = 1e-12;
// Divergences at or below this are rounding residue between identical frames.
constexpr double kDivergenceFloor = 1e-12;

std::vector<double> symmetric_filter(std::span<const double> values,
                                     std::span<const double> taps) {
  const std::size_t n = values.size();
  const auto half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      acc += taps[static_cast<std::size_t>(k + half)] *
             values[reflect_index(static_cast<std::ptrdiff_t>(i) + k, n)];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace

void BoundaryConfig::validate() const {
  if (w < 2 || w % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig, "w=" + std::to_string(w) + " must be even and >= 2");
  }
  if (poly_order != 2) throw Error(ErrorCode::kInvalidConfig, "only quadratic smoothing is supported");
  if (!(mad_k >= 0.0) || !std::isfinite(mad_k)) {
    throw Error(ErrorCode::kInvalidConfig, "mad_k must be a finite value >= 0");
  }
  if (fixed_threshold && !std::isfinite(*fixed_threshold)) {
    throw Error(ErrorCode::kInvalidConfig, "fixed threshold must be finite");
  }
}

double divergence(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "divergence operands differ in length");
  const double jump = detail::squared_distance(a, b);
  const double cosine =
      detail::cosine_from_parts(detail::dot(a, b), detail::squared_norm(a), detail::squared_norm(b), kNormGuard);
  return jump + (1.0 - cosine);
}

std::vector<double> divergence_signal(const Matrix& features) {
  const std::size_t t = features.rows();
  if (t < 2) return {};
  std::vector<double> out(t - 1);
  const auto count = static_cast<std::ptrdiff_t>(t - 1);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = divergence(features.row(i), features.row(i + 1));
  }
  return out;
}

std::vector<double> savgol_coefficients(std::size_t w) {
  if (w < 2 || w % 2 != 0) throw Error(ErrorCode::kInvalidConfig, "savgol window must be even and >= 2");
  const auto m = static_cast<double>(w / 2);
  const double base = 3.0 * (3.0 * m * m + 3.0 * m - 1.0);
  const double norm = (2.0 * m - 1.0) * (2.0 * m + 1.0) * (2.0 * m + 3.0);
  std::vector<double> taps(w + 1);
  const auto half = static_cast<std::ptrdiff_t>(w / 2);
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const auto kk = static_cast<double>(k);
    taps[static_cast<std::size_t>(k + half)] = (base - 15.0 * kk * kk) / norm;
  }
  return taps;
}

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t r = i % period;
  if (r < 0) r += period;
  if (r >= static_cast<std::ptrdiff_t>(n)) r = period - r;
  return static_cast<std::size_t>(r);
}

std::vector<double> savgol_smooth(std::span<const double> raw, const BoundaryConfig& cfg) {
  cfg.validate();
  if (raw.empty()) return {};
  const auto taps = savgol_coefficients(cfg.w);
  return symmetric_filter(raw, taps);
}

std::vector<double> moving_average(std::span<const double> values, std::size_t w) {
  if (values.empty()) return {};
  const std::vector<double> taps(w + 1, 1.0 / static_cast<double>(w + 1));
  return symmetric_filter(values, taps);
}

std::vector<double> signal_ratio(std::span<const double> smoothed, const BoundaryConfig& cfg) {
  cfg.validate();
  const auto mean = moving_average(smoothed, cfg.w);
  std::vector<double> ratio(smoothed.size());
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    ratio[i] = smoothed[i] / std::max(mean[i], kRatioGuard);
  }
  return ratio;
}

double median(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kPrecondition, "median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double adaptive_threshold(std::span<const double> ratio, const BoundaryConfig& cfg) {
  const double center = median(ratio);
  std::vector<double> deviation(ratio.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) deviation[i] = std::abs(ratio[i] - center);
  return center + cfg.mad_k * median(deviation);
}

std::vector<std::size_t> threshold_candidates(std::span<const double> ratio, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (ratio[i] > threshold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> merge_candidates(std::span<const std::size_t> candidates,
                                          std::span<const double> ratio, std::size_t min_gap) {
  std::vector<std::size_t> out;
  std::size_t s = 0;
  while (s < candidates.size()) {
    std::size_t best = candidates[s];
    std::size_t e = s + 1;
    while (e < candidates.size() && candidates[e] - candidates[e - 1] <= min_gap) {
      if (ratio[candidates[e]] > ratio[best]) best = candidates[e];
      ++e;
    }
    out.push_back(best);
    s = e;
  }
  return out;
}

std::vector<std::size_t> enforce_min_event_length(std::vector<std::size_t> boundaries,
                                                  std::size_t frames, const Matrix& features,
                                                  std::size_t min_event_len) {
  auto similarity_across = [&](std::size_t b) {
    const auto left = features.row(b - 1);
    const auto right = features.row(b);
    return detail::cosine_from_parts(detail::dot(left, right), detail::squared_norm(left),
                                     detail::squared_norm(right), kNormGuard);
  };
  while (!boundaries.empty()) {
    // Event e spans [start(e), end(e)); there are boundaries.size() + 1 events.
    auto start = [&](std::size_t e) { return e == 0 ? std::size_t{0} : boundaries[e - 1]; };
    auto end = [&](std::size_t e) { return e == boundaries.size() ? frames : boundaries[e]; };
    std::size_t shortest = 0;
    std::size_t shortest_len = frames + 1;
    for (std::size_t e = 0; e <= boundaries.size(); ++e) {
      const std::size_t len = end(e) - start(e);
      if (len < shortest_len) {
        shortest = e;
        shortest_len = len;
      }
    }
    if (shortest_len >= min_event_len) break;
    std::size_t drop;  // index into boundaries
    if (shortest == 0) {
      drop = 0;
    } else if (shortest == boundaries.size()) {
      drop = boundaries.size() - 1;
    } else {
      const double left = similarity_across(boundaries[shortest - 1]);
      const double right = similarity_across(boundaries[shortest]);
      drop = left >= right ? shortest - 1 : shortest;
    }
    boundaries.erase(boundaries.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return boundaries;
}

BoundarySignal detect_boundaries(const PropagatedFeatures& features, const BoundaryConfig& cfg) {
  return detect_boundaries(features.vectors, cfg);
}

BoundarySignal detect_boundaries(const Matrix& features, const BoundaryConfig& cfg) {
  cfg.validate();
  const std::size_t t = features.rows();
  if (t == 0) throw Error(ErrorCode::kTooShort, "a video needs at least one frame");
  BoundarySignal signal;
  if (t == 1) return signal;

  signal.raw = divergence_signal(features);
  std::vector<double> cleaned = signal.raw;
  for (double& x : cleaned) {
    if (x <= kDivergenceFloor) x = 0.0;
  }
  signal.smoothed = savgol_smooth(cleaned, cfg);
  for (double& x : signal.smoothed) x = std::max(x, 0.0);
  signal.ratio = signal_ratio(signal.smoothed, cfg);
  signal.threshold = cfg.fixed_threshold ? *cfg.fixed_threshold : adaptive_threshold(signal.ratio, cfg);
  signal.candidates = threshold_candidates(signal.ratio, signal.threshold);

  auto merged = merge_candidates(signal.candidates, signal.ratio, cfg.min_gap);
  for (std::size_t& b : merged) b += 1;
  signal.boundaries = enforce_min_event_length(std::move(merged), t, features, cfg.min_event_len);
  return signal;
}

std::string curve_csv(const BoundarySignal& signal) {
  std::ostringstream out;
  out.precision(17);
  out << "index,raw,smoothed,ratio\n";
  for (std::size_t i = 0; i < signal.raw.size(); ++i) {
    out << i << ',' << signal.raw[i] << ',' << signal.smoothed[i] << ',' << signal.ratio[i] << '\n';
  }
  return out.str();
}

std::string boundary_json(const BoundarySignal& signal) {
  nlohmann::ordered_json out;
  out["threshold"] = signal.threshold;
  out["boundaries"] = signal.boundaries;
  return out.dump();
}

}  // namespace eventvad
