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
#include <span>
#include <string>
#include <vector>

#include "eventvad/features.hpp"

namespace eventvad {

struct GraphConfig {
  double alpha = 0.75;
  double gamma = 0.6;
  std::size_t window = 60;

  void validate() const;
};

// Time-decayed frame graph. Neighbours of node i are the frames j with
// 0 < |i - j| <= window, in increasing order; weights are stored per directed
// slot (CSR) and are identical for (i, j) and (j, i).
class DynamicGraph {
 public:
  DynamicGraph() = default;
  // Explicit construction from per-node neighbour lists and matching weights.
  DynamicGraph(std::vector<std::vector<std::size_t>> neighbors,
               std::vector<std::vector<double>> weights, GraphConfig config);
  // Empty neighbour lists for n nodes.
  DynamicGraph(std::size_t n, GraphConfig config);
  // Compressed rows: neighbours of i are targets[offsets[i] .. offsets[i+1]).
  static DynamicGraph from_csr(GraphConfig config, std::vector<std::size_t> offsets,
                               std::vector<std::size_t> targets, std::vector<double> weights);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_slots() const noexcept { return targets_.size(); }
  const GraphConfig& config() const noexcept { return config_; }

  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(std::size_t i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  // Weight of the stored pair (i, j); throws Error(kPrecondition) if absent.
  double weight(std::size_t i, std::size_t j) const;

  // JSON debug dump {n, window, gamma, alpha, edges:[[i,j,w],...]} with each
  // undirected edge listed once (i < j).
  std::string to_json() const;

 private:
  GraphConfig config_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> targets_;
  std::vector<double> weights_;
};

// [alpha * cos(clip_i, clip_j) + (1 - alpha) * exp(-|flow_i - flow_j|_2)] / (1 + gamma * lag)
double edge_weight(std::span<const float> clip_i, std::span<const float> clip_j,
                   std::span<const float> flow_i, std::span<const float> flow_j,
                   std::size_t lag, const GraphConfig& config);

// Rows are filled in parallel; see reference::build_graph for the serial path.
DynamicGraph build_graph(const FrameFeatures& frames, const GraphConfig& config);

namespace reference {
DynamicGraph build_graph(const FrameFeatures& frames, const GraphConfig& config);
}  // namespace reference

}  // namespace eventvad
