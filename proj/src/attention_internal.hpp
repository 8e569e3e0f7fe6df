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
#include <vector>

#include "eventvad/dynamic_graph.hpp"
#include "eventvad/matrix.hpp"

namespace eventvad::detail {

// Projected features of one propagation step.
struct StepInputs {
  const Matrix& features;
  const Matrix& queries;  // features * Q
  const Matrix& keys;     // features * K
  const Matrix& values;   // features * V
  double inv_scale;       // 1 / sqrt(d_a)
};

// Softmax weights of node i over its neighbours into `weights` (resized).
void attention_row_weights(const DynamicGraph& graph, const StepInputs& in, std::size_t i,
                           std::vector<double>& weights);

// out = f_i + sum_j a_ij E_ij v_j; out = f_i when i has no neighbours.
void update_row(const DynamicGraph& graph, const StepInputs& in, std::size_t i,
                std::vector<double>& scratch, std::span<double> out);

// Subtract the column means; means are accumulated in row order.
void center_rows(Matrix& m);

}  // namespace eventvad::detail
