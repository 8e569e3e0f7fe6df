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

// Serial reference implementations of the parallel kernels. They share the
// per-row arithmetic with the parallel versions and exist to pin the
// parallel results in tests and to give the benchmark a baseline.

#include <cmath>

#include "../attention_internal.hpp"
#include "../graph_internal.hpp"
#include "eventvad/boundary_detector.hpp"
#include "eventvad/dynamic_graph.hpp"
#include "eventvad/error.hpp"
#include "eventvad/graph_attention.hpp"
#include "eventvad/kernels.hpp"

namespace eventvad::reference {

DynamicGraph build_graph(const FrameFeatures& frames, const GraphConfig& config) {
  config.validate();
  const std::size_t n = frames.frames();
  auto layout = detail::windowed_layout(n, config.window);
  std::vector<double> sq_norms(n);
  for (std::size_t i = 0; i < n; ++i) sq_norms[i] = detail::squared_norm(frames.clip_row(i));
  std::vector<double> weights(layout.targets.size());
  for (std::size_t i = 0; i < n; ++i) detail::fill_graph_row(frames, sq_norms, layout, config, i, weights);
  return DynamicGraph::from_csr(config, std::move(layout.offsets), std::move(layout.targets),
                                std::move(weights));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "matrix product shapes");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) detail::multiply_row(a, b, i, out);
  return out;
}

PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg, const Projections& projections) {
  cfg.validate();
  if (features.frames() != graph.size() || features.dim() != cfg.d) {
    throw Error(ErrorCode::kDimensionMismatch, "features do not match the graph or config");
  }
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(cfg.effective_scale_dim()));
  Matrix current = features.vectors;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const Matrix queries = reference::multiply(current, projections.query);
    const Matrix keys = reference::multiply(current, projections.key);
    const Matrix values = reference::multiply(current, projections.value);
    const detail::StepInputs in{current, queries, keys, values, inv_scale};
    Matrix next(current.rows(), current.cols());
    std::vector<double> scratch;
    for (std::size_t i = 0; i < current.rows(); ++i) detail::update_row(graph, in, i, scratch, next.row(i));
    detail::center_rows(next);
    current = std::move(next);
  }
  return {std::move(current), cfg.iterations, cfg.seed};
}

std::vector<double> divergence_signal(const Matrix& features) {
  const std::size_t t = features.rows();
  if (t < 2) return {};
  std::vector<double> out(t - 1);
  for (std::size_t i = 0; i + 1 < t; ++i) out[i] = divergence(features.row(i), features.row(i + 1));
  return out;
}

}  // namespace eventvad::reference
