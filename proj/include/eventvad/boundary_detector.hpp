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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventvad/graph_attention.hpp"
#include "eventvad/matrix.hpp"

namespace eventvad {

struct BoundaryConfig {
  std::size_t w = 60;              // window; filters use w + 1 symmetric taps
  std::size_t poly_order = 2;
  double mad_k = 3.0;
  std::size_t min_gap = 30;        // candidate indices at most this far apart form one run
  std::size_t min_event_len = 16;
  std::optional<double> fixed_threshold;  // replaces the MAD threshold when set

  std::size_t taps() const noexcept { return w + 1; }
  void validate() const;
};

struct BoundarySignal {
  std::vector<double> raw;        // divergence of transition (i, i+1), length T - 1
  std::vector<double> smoothed;   // Savitzky-Golay output of raw
  std::vector<double> ratio;      // smoothed / moving average
  double threshold = 0.0;
  std::vector<std::size_t> candidates;  // transition indices with ratio > threshold
  std::vector<std::size_t> boundaries;  // first frame of each event after the first
};

// |b - a|^2 + (1 - cos(a, b)); a zero-norm operand makes the cosine 0.
double divergence(std::span<const double> a, std::span<const double> b);

// divergence(f_i, f_{i+1}) for every consecutive pair, in parallel.
std::vector<double> divergence_signal(const Matrix& features);

// Centre-point weights of a least-squares quadratic over 2m + 1 taps,
// index 0 corresponding to offset -m.
std::vector<double> savgol_coefficients(std::size_t w);

// Index into [0, n) after mirroring about the ends without repeating the
// edge sample (..., x2, x1 | x0, x1, x2, ...).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

std::vector<double> savgol_smooth(std::span<const double> raw, const BoundaryConfig& cfg);
std::vector<double> moving_average(std::span<const double> values, std::size_t w);
std::vector<double> signal_ratio(std::span<const double> smoothed, const BoundaryConfig& cfg);

// Mean of the two central order statistics for even lengths.
double median(std::span<const double> values);
double adaptive_threshold(std::span<const double> ratio, const BoundaryConfig& cfg);

std::vector<std::size_t> threshold_candidates(std::span<const double> ratio, double threshold);

// Collapses runs of candidates whose consecutive gaps are <= min_gap to the
// index with the largest ratio (earliest on ties).
std::vector<std::size_t> merge_candidates(std::span<const std::size_t> candidates,
                                          std::span<const double> ratio, std::size_t min_gap);

// Dissolves events shorter than min_event_len into the neighbour whose shared
// boundary has the larger cosine similarity across it, shortest event first.
std::vector<std::size_t> enforce_min_event_length(std::vector<std::size_t> boundaries,
                                                  std::size_t frames, const Matrix& features,
                                                  std::size_t min_event_len);

BoundarySignal detect_boundaries(const PropagatedFeatures& features, const BoundaryConfig& cfg);
BoundarySignal detect_boundaries(const Matrix& features, const BoundaryConfig& cfg);

// CSV "index,raw,smoothed,ratio" (one row per transition) and JSON
// {threshold, boundaries:[...]}.
std::string curve_csv(const BoundarySignal& signal);
std::string boundary_json(const BoundarySignal& signal);

namespace reference {
std::vector<double> divergence_signal(const Matrix& features);
}  // namespace reference

}  // namespace eventvad
