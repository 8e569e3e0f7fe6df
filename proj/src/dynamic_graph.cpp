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

#include "eventvad/dynamic_graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "eventvad/error.hpp"
#include "eventvad/kernels.hpp"
#include "graph_internal.hpp"

namespace eventvad {

void GraphConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "alpha=" + std::to_string(alpha) + " is outside [0, 1]");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidConfig, "gamma must be a finite value >= 0");
  }
  if (window < 1) throw Error(ErrorCode::kInvalidConfig, "window must be >= 1");
}

DynamicGraph::DynamicGraph(std::size_t n, GraphConfig config)
    : config_(config), offsets_(n + 1, 0) {}

DynamicGraph::DynamicGraph(std::vector<std::vector<std::size_t>> neighbors,
                           std::vector<std::vector<double>> weights, GraphConfig config)
    : config_(config) {
  if (neighbors.size() != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "neighbour and weight lists differ in length");
  }
  offsets_.push_back(0);
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    if (neighbors[i].size() != weights[i].size()) {
      throw Error(ErrorCode::kDimensionMismatch, "node " + std::to_string(i) + " has mismatched weights");
    }
    for (std::size_t j : neighbors[i]) {
      if (j >= neighbors.size() || j == i) {
        throw Error(ErrorCode::kPrecondition, "node " + std::to_string(i) + " has an invalid neighbour");
      }
    }
    if (std::adjacent_find(neighbors[i].begin(), neighbors[i].end(), std::greater_equal<>()) !=
        neighbors[i].end()) {
      throw Error(ErrorCode::kPrecondition,
                  "node " + std::to_string(i) + " neighbours are not strictly increasing");
    }
    targets_.insert(targets_.end(), neighbors[i].begin(), neighbors[i].end());
    weights_.insert(weights_.end(), weights[i].begin(), weights[i].end());
    offsets_.push_back(targets_.size());
  }
  for (std::size_t i = 0; i < size(); ++i) {
    const auto nbrs = this->neighbors(i);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      const auto back = this->neighbors(nbrs[s]);
      const auto it = std::lower_bound(back.begin(), back.end(), i);
      if (it == back.end() || *it != i ||
          this->weights(nbrs[s])[static_cast<std::size_t>(it - back.begin())] != this->weights(i)[s]) {
        throw Error(ErrorCode::kPrecondition, "edge (" + std::to_string(i) + ", " +
                                                  std::to_string(nbrs[s]) + ") is not symmetric");
      }
    }
  }
}

DynamicGraph DynamicGraph::from_csr(GraphConfig config, std::vector<std::size_t> offsets,
                                    std::vector<std::size_t> targets, std::vector<double> weights) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != targets.size() ||
      targets.size() != weights.size() || !std::is_sorted(offsets.begin(), offsets.end())) {
    throw Error(ErrorCode::kDimensionMismatch, "malformed compressed graph rows");
  }
  DynamicGraph g;
  g.config_ = config;
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  g.weights_ = std::move(weights);
  return g;
}

double DynamicGraph::weight(std::size_t i, std::size_t j) const {
  if (i >= size()) throw Error(ErrorCode::kPrecondition, "node out of range");
  const auto nbrs = neighbors(i);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
  if (it == nbrs.end() || *it != j) {
    throw Error(ErrorCode::kPrecondition,
                "no edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  return weights(i)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::string DynamicGraph::to_json() const {
  nlohmann::ordered_json out;
  out["n"] = size();
  out["window"] = config_.window;
  out["gamma"] = config_.gamma;
  out["alpha"] = config_.alpha;
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    const auto nbrs = neighbors(i);
    const auto w = weights(i);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      if (nbrs[s] > i) edges.push_back({i, nbrs[s], w[s]});
    }
  }
  out["edges"] = std::move(edges);
  return out.dump();
}

double edge_weight(std::span<const float> clip_i, std::span<const float> clip_j,
                   std::span<const float> flow_i, std::span<const float> flow_j,
                   std::size_t lag, const GraphConfig& config) {
  if (clip_i.size() != clip_j.size() || flow_i.size() != flow_j.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "edge_weight operands differ in length");
  }
  const double cosine = detail::cosine_from_parts(detail::dot(clip_i, clip_j), detail::squared_norm(clip_i),
                                                  detail::squared_norm(clip_j), kNormGuard);
  const double distance = std::sqrt(detail::squared_distance(flow_i, flow_j));
  return detail::edge_weight_from_parts(cosine, distance, lag, config.alpha, config.gamma);
}

namespace detail {

GraphLayout windowed_layout(std::size_t n, std::size_t window) {
  GraphLayout layout;
  layout.offsets.reserve(n + 1);
  layout.offsets.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= window ? i - window : 0;
    const std::size_t hi = std::min(n - 1, i + window);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != i) layout.targets.push_back(j);
    }
    layout.offsets.push_back(layout.targets.size());
  }
  return layout;
}

void fill_graph_row(const FrameFeatures& frames, std::span<const double> clip_sq_norms,
                    const GraphLayout& layout, const GraphConfig& config, std::size_t i,
                    std::span<double> weights) {
  const auto clip_i = frames.clip_row(i);
  const auto flow_i = frames.flow_row(i);
  for (std::size_t s = layout.offsets[i]; s < layout.offsets[i + 1]; ++s) {
    const std::size_t j = layout.targets[s];
    const double cosine = cosine_from_parts(dot(clip_i, frames.clip_row(j)), clip_sq_norms[i],
                                            clip_sq_norms[j], kNormGuard);
    const double distance = std::sqrt(squared_distance(flow_i, frames.flow_row(j)));
    const std::size_t lag = i > j ? i - j : j - i;
    weights[s] = edge_weight_from_parts(cosine, distance, lag, config.alpha, config.gamma);
  }
}

}  // namespace detail

DynamicGraph build_graph(const FrameFeatures& frames, const GraphConfig& config) {
  config.validate();
  const std::size_t n = frames.frames();
  auto layout = detail::windowed_layout(n, config.window);
  std::vector<double> sq_norms(n);
  std::vector<double> weights(layout.targets.size());
  const auto rows = static_cast<std::ptrdiff_t>(n);

#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      sq_norms[i] = detail::squared_norm(frames.clip_row(i));
    }
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      detail::fill_graph_row(frames, sq_norms, layout, config, i, weights);
    }
  }
  return DynamicGraph::from_csr(config, std::move(layout.offsets), std::move(layout.targets),
                                std::move(weights));
}

}  // namespace eventvad
