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

#include "eventvad/graph_attention.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "json.hpp"

#include "attention_internal.hpp"
#include "eventvad/error.hpp"
#include "eventvad/kernels.hpp"

namespace eventvad {

void AttentionConfig::validate() const {
  if (k == 0 || d == 0) throw Error(ErrorCode::kInvalidConfig, "k and d must be positive");
  if (k > d) {
    throw Error(ErrorCode::kInvalidConfig,
                "k=" + std::to_string(k) + " exceeds d=" + std::to_string(d));
  }
  if (iterations < 1) throw Error(ErrorCode::kInvalidConfig, "iterations must be >= 1");
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, NormalSampler& normal) {
  Matrix m(rows, cols);
  for (double& x : m.data()) x = normal();
  return m;
}

Matrix orthonormal_columns(const Matrix& m) {
  if (m.rows() < m.cols()) {
    throw Error(ErrorCode::kInvalidConfig, "QR needs at least as many rows as columns");
  }
  Eigen::MatrixXd dense(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) dense(r, c) = m(r, c);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(dense);
  const Eigen::MatrixXd thin =
      qr.householderQ() * Eigen::MatrixXd::Identity(dense.rows(), dense.cols());
  Matrix q(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) q(r, c) = thin(r, c);
  return q;
}

Projections make_projections(const AttentionConfig& cfg) {
  cfg.validate();
  NormalSampler normal(cfg.seed);
  Projections p;
  p.query = orthonormal_columns(gaussian_matrix(cfg.d, cfg.k, normal));
  p.key = orthonormal_columns(gaussian_matrix(cfg.d, cfg.k, normal));
  p.value = orthonormal_columns(gaussian_matrix(cfg.d, cfg.d, normal));
  return p;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double peak = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& x : out) {
    x = std::exp(x - peak);
    total += x;
  }
  for (double& x : out) x /= total;
  return out;
}

namespace detail {

void attention_row_weights(const DynamicGraph& graph, const StepInputs& in, std::size_t i,
                           std::vector<double>& weights) {
  const auto nbrs = graph.neighbors(i);
  weights.resize(nbrs.size());
  const auto q = in.queries.row(i);
  for (std::size_t s = 0; s < nbrs.size(); ++s) {
    weights[s] = dot(q, in.keys.row(nbrs[s])) * in.inv_scale;
  }
  if (weights.empty()) return;
  const double peak = *std::max_element(weights.begin(), weights.end());
  double total = 0.0;
  for (double& x : weights) {
    x = std::exp(x - peak);
    total += x;
  }
  for (double& x : weights) x /= total;
}

void update_row(const DynamicGraph& graph, const StepInputs& in, std::size_t i,
                std::vector<double>& scratch, std::span<double> out) {
  const auto f = in.features.row(i);
  std::copy(f.begin(), f.end(), out.begin());
  const auto nbrs = graph.neighbors(i);
  if (nbrs.empty()) return;
  attention_row_weights(graph, in, i, scratch);
  const auto edge = graph.weights(i);
  for (std::size_t s = 0; s < nbrs.size(); ++s) {
    const double coeff = scratch[s] * edge[s];
    const auto v = in.values.row(nbrs[s]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += coeff * v[c];
  }
}

void center_rows(Matrix& m) {
  if (m.rows() == 0) return;
  std::vector<double> mean(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) mean[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(m.rows());
  for (double& x : mean) x *= inv;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] -= mean[c];
  }
}

}  // namespace detail

namespace {

void check_inputs(const FusedFeatures& features, const DynamicGraph& graph,
                  const AttentionConfig& cfg, const Projections& p) {
  cfg.validate();
  if (features.frames() != graph.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "features have " + std::to_string(features.frames()) +
                                                   " frames but the graph has " +
                                                   std::to_string(graph.size()) + " nodes");
  }
  if (features.dim() != cfg.d) {
    throw Error(ErrorCode::kDimensionMismatch, "feature dim " + std::to_string(features.dim()) +
                                                   " != configured d=" + std::to_string(cfg.d));
  }
  if (p.query.rows() != cfg.d || p.query.cols() != cfg.k || p.key.rows() != cfg.d ||
      p.key.cols() != cfg.k || p.value.rows() != cfg.d || p.value.cols() != cfg.d) {
    throw Error(ErrorCode::kDimensionMismatch, "projection shapes do not match the config");
  }
}

}  // namespace

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "matrix product shapes");
  Matrix out(a.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i) detail::multiply_row(a, b, i, out);
  return out;
}

std::vector<NeighborWeight> attention_weights(std::size_t i, const DynamicGraph& graph,
                                              const Matrix& features, const Matrix& query,
                                              const Matrix& key, const AttentionConfig& cfg) {
  if (i >= graph.size() || features.rows() != graph.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "node index or feature rows do not match the graph");
  }
  const auto nbrs = graph.neighbors(i);
  if (nbrs.empty()) throw Error(ErrorCode::kNoNeighbors, "node " + std::to_string(i) + " has no neighbours");
  std::vector<double> qi(query.cols());
  detail::project_row(features.row(i), query, qi);
  std::vector<double> logits(nbrs.size());
  std::vector<double> kj(key.cols());
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(cfg.effective_scale_dim()));
  for (std::size_t s = 0; s < nbrs.size(); ++s) {
    detail::project_row(features.row(nbrs[s]), key, kj);
    logits[s] = detail::dot(std::span<const double>(qi), std::span<const double>(kj)) * inv_scale;
  }
  const auto w = softmax(logits);
  std::vector<NeighborWeight> out;
  out.reserve(w.size());
  for (std::size_t s = 0; s < w.size(); ++s) out.push_back({nbrs[s], w[s]});
  return out;
}

PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg) {
  return propagate(features, graph, cfg, make_projections(cfg));
}

PropagatedFeatures propagate(const FusedFeatures& features, const DynamicGraph& graph,
                             const AttentionConfig& cfg, const Projections& projections) {
  check_inputs(features, graph, cfg, projections);
  const double inv_scale = 1.0 / std::sqrt(static_cast<double>(cfg.effective_scale_dim()));
  Matrix current = features.vectors;
  const auto rows = static_cast<std::ptrdiff_t>(current.rows());
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const Matrix queries = multiply(current, projections.query);
    const Matrix keys = multiply(current, projections.key);
    const Matrix values = multiply(current, projections.value);
    const detail::StepInputs in{current, queries, keys, values, inv_scale};
    Matrix next(current.rows(), current.cols());
#pragma omp parallel
    {
      std::vector<double> scratch;
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t i = 0; i < rows; ++i) {
        detail::update_row(graph, in, i, scratch, next.row(i));
      }
    }
    detail::center_rows(next);
    current = std::move(next);
  }
  return {std::move(current), cfg.iterations, cfg.seed};
}

Matrix cosine_similarity_matrix(const Matrix& features, std::size_t first, std::size_t last) {
  if (first > last || last > features.rows()) {
    throw Error(ErrorCode::kPrecondition, "similarity range is outside the feature rows");
  }
  const std::size_t n = last - first;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = detail::squared_norm(features.row(first + i));
  Matrix out(n, n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = detail::cosine_from_parts(
          detail::dot(features.row(first + i), features.row(first + j)), sq[i], sq[j], kNormGuard);
    }
  }
  return out;
}

std::string similarity_json(const Matrix& before, const Matrix& after, std::size_t first,
                            std::size_t last) {
  auto to_rows = [](const Matrix& m) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
  };
  nlohmann::ordered_json out;
  out["first"] = first;
  out["last"] = last;
  out["pre"] = to_rows(cosine_similarity_matrix(before, first, last));
  out["post"] = to_rows(cosine_similarity_matrix(after, first, last));
  return out.dump();
}

}  // namespace eventvad
