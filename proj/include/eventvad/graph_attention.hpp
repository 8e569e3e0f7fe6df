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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eventvad/dynamic_graph.hpp"
#include "eventvad/features.hpp"
#include "eventvad/matrix.hpp"
#include "eventvad/rng.hpp"

namespace eventvad {

struct AttentionConfig {
  std::uint64_t seed = 0;
  std::size_t k = 64;            // projected dimension of queries and keys
  std::size_t d = kFusedDim;     // feature dimension
  std::size_t iterations = 1;
  std::size_t scale_dim = 0;     // d_a in the softmax scale; 0 means k

  std::size_t effective_scale_dim() const noexcept { return scale_dim == 0 ? k : scale_dim; }
  void validate() const;
};

// Fixed orthonormal projections: query (d x k), key (d x k), value (d x d).
struct Projections {
  Matrix query;
  Matrix key;
  Matrix value;
};

// Standard-normal matrix filled row by row from the sampler.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, NormalSampler& normal);

// Thin Q factor (Householder QR) of a rows x cols matrix, rows >= cols.
Matrix orthonormal_columns(const Matrix& m);

// Q, K, V drawn in that order from one NormalSampler(cfg.seed).
Projections make_projections(const AttentionConfig& cfg);

struct NeighborWeight {
  std::size_t neighbor;
  double weight;
};

// Numerically stable softmax (max-subtracted).
std::vector<double> softmax(std::span<const double> logits);

// Softmax over the neighbours of node i of (f_i Q)(f_j K)^T / sqrt(d_a).
// Throws Error(kNoNeighbors) when node i has no neighbours.
std::vector<NeighborWeight> attention_weights(std::size_t i, const DynamicGraph& graph,
                                              const Matrix& features, const Matrix& query,
                                              const Matrix& key, const AttentionConfig& cfg);

struct PropagatedFeatures {
  Matrix vectors;
  std::size_t iterations_applied = 0;
  std::uint64_t seed = 0;
};

// Per iteration: f_i <- f_i + sum_j Atten_ij * E_ij * (f_j V) over the graph
// neighbours, then every vector has the frame mean subtracted.
PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg);
PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg, const Projections& projections);

// Pairwise cosine similarity of rows [first, last) for heat-map export.
Matrix cosine_similarity_matrix(const Matrix& features, std::size_t first, std::size_t last);
// JSON {first, last, pre:[[...]], post:[[...]]}.
std::string similarity_json(const Matrix& before, const Matrix& after, std::size_t first,
                            std::size_t last);

namespace reference {
PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg, const Projections& projections);
Matrix multiply(const Matrix& a, const Matrix& b);
}  // namespace reference

Matrix multiply(const Matrix& a, const Matrix& b);

}  // namespace eventvad
