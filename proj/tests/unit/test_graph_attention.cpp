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

#include <cmath>

#include "doctest.h"
#include "eventvad/error.hpp"
#include "eventvad/graph_attention.hpp"
#include "helpers.hpp"

using namespace eventvad;

namespace {

// Classical Gram-Schmidt, kept independent of the Householder path.
Matrix gram_schmidt(const Matrix& m) {
  Matrix q(m.rows(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::vector<double> v(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
    for (std::size_t p = 0; p < c; ++p) {
      double proj = 0.0;
      for (std::size_t r = 0; r < m.rows(); ++r) proj += q(r, p) * m(r, c);
      for (std::size_t r = 0; r < m.rows(); ++r) v[r] -= proj * q(r, p);
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (std::size_t r = 0; r < m.rows(); ++r) q(r, c) = v[r] / n;
  }
  return q;
}

double gram_error(const Matrix& q) {
  double worst = 0.0;
  for (std::size_t a = 0; a < q.cols(); ++a) {
    for (std::size_t b = 0; b < q.cols(); ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < q.rows(); ++r) s += q(r, a) * q(r, b);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  }
  return worst;
}

FusedFeatures fused_from(const Matrix& m) {
  FusedFeatures f;
  f.vectors = m;
  return f;
}

// Chain graph 0-1-...-(n-1) with the given weight on every edge.
DynamicGraph chain(std::size_t n, double w) {
  std::vector<std::vector<std::size_t>> nb(n);
  std::vector<std::vector<double>> ws(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    nb[i].push_back(i + 1);
    ws[i].push_back(w);
    nb[i + 1].insert(nb[i + 1].begin(), i);
    ws[i + 1].insert(ws[i + 1].begin(), w);
  }
  GraphConfig cfg;
  cfg.window = 1;
  return DynamicGraph(nb, ws, cfg);
}

}  // namespace

TEST_CASE("projections are orthonormal and seeded") {
  AttentionConfig cfg;
  const auto p = make_projections(cfg);
  CHECK(p.query.rows() == kFusedDim);
  CHECK(p.query.cols() == 64);
  CHECK(p.value.cols() == kFusedDim);
  CHECK(gram_error(p.query) < 1e-6);
  CHECK(gram_error(p.key) < 1e-6);
  CHECK(gram_error(p.value) < 1e-6);
  const auto again = make_projections(cfg);
  CHECK(again.query == p.query);
  CHECK(again.value == p.value);
  cfg.seed = 1;
  CHECK_FALSE(make_projections(cfg).query == p.query);
}

TEST_CASE("k=1, d=2 query is a unit vector") {
  AttentionConfig cfg;
  cfg.k = 1;
  cfg.d = 2;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto p = make_projections(cfg);
    CHECK(std::hypot(p.query(0, 0), p.query(1, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("Householder Q matches Gram-Schmidt up to column signs (d=4, k=2, seed 7)") {
  NormalSampler normal(7);
  const Matrix g = gaussian_matrix(4, 2, normal);
  const Matrix h = orthonormal_columns(g);
  const Matrix gs = gram_schmidt(g);
  CHECK(gram_error(h) < 1e-9);
  for (std::size_t c = 0; c < 2; ++c) {
    const double sign = h(0, c) * gs(0, c) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < 4; ++r) CHECK(h(r, c) == doctest::Approx(sign * gs(r, c)).epsilon(1e-12));
  }
}

TEST_CASE("softmax oracle") {
  const double logits[] = {1.0, 2.0, 3.0};
  const auto s = softmax(logits);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(s[0] == doctest::Approx(std::exp(1.0) / z).epsilon(1e-14));
  CHECK(s[1] == doctest::Approx(std::exp(2.0) / z).epsilon(1e-14));
  CHECK(s[2] == doctest::Approx(std::exp(3.0) / z).epsilon(1e-14));
  CHECK(s[0] == doctest::Approx(0.0900).epsilon(1e-3));
  CHECK(s[1] == doctest::Approx(0.2447).epsilon(1e-3));
  CHECK(s[2] == doctest::Approx(0.6652).epsilon(1e-3));
  const double huge[] = {1000.0, 1000.0};
  const auto h = softmax(huge);
  CHECK(h[0] == 0.5);
  CHECK(h[1] == 0.5);
}

TEST_CASE("attention weights") {
  AttentionConfig cfg;
  cfg.k = 1;
  cfg.d = 2;
  const auto p = make_projections(cfg);
  Matrix f(3, 2);
  f(0, 0) = 1.0;
  f(1, 0) = 0.3;
  f(1, 1) = 0.4;
  f(2, 0) = 0.3;
  f(2, 1) = 0.4;
  SUBCASE("single neighbour") {
    const auto g = chain(3, 0.5);
    const auto w = attention_weights(0, g, f, p.query, p.key, cfg);
    REQUIRE(w.size() == 1);
    CHECK(w[0].weight == 1.0);
  }
  SUBCASE("identical neighbours split evenly") {
    GraphConfig gc;
    const DynamicGraph g({{1, 2}, {0}, {0}}, {{0.5, 0.5}, {0.5}, {0.5}}, gc);
    const auto w = attention_weights(0, g, f, p.query, p.key, cfg);
    REQUIRE(w.size() == 2);
    CHECK(w[0].weight == 0.5);
    CHECK(w[1].weight == 0.5);
  }
  SUBCASE("isolated node") {
    const DynamicGraph g(3, GraphConfig{});
    CHECK_THROWS_AS(attention_weights(0, g, f, p.query, p.key, cfg), Error);
  }
}

TEST_CASE("3-node hand trace") {
  Matrix f(3, 2);
  f(0, 0) = 1.0;
  f(1, 0) = 0.5;
  f(1, 1) = 0.5;
  f(2, 1) = 1.0;
  GraphConfig gc;
  gc.window = 1;
  const DynamicGraph g({{1}, {0, 2}, {1}}, {{0.8}, {0.8, 0.5}, {0.5}}, gc);
  Projections p;
  p.query = Matrix(2, 1);
  p.query(0, 0) = 1.0;
  p.key = Matrix(2, 1);
  p.key(1, 0) = 1.0;
  p.value = Matrix(2, 2);
  p.value(0, 1) = 1.0;
  p.value(1, 0) = 1.0;
  AttentionConfig cfg;
  cfg.k = 1;
  cfg.d = 2;
  const auto out = propagate(fused_from(f), g, cfg, p).vectors;
  // Frozen from tests/oracles/attention_trace.py.
  const double expected[3][2] = {{0.5795901114663575, -0.4173441783461722},
                                 {-0.009180222932715143, -0.015311643307655776},
                                 {-0.5704098885336424, 0.43265582165382777}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(out(i, c) - expected[i][c]) < 1e-15);
}

TEST_CASE("propagate edge cases") {
  AttentionConfig cfg;
  cfg.k = 2;
  cfg.d = 4;
  SUBCASE("single frame becomes zero") {
    const Matrix f = testing::random_matrix(1, 4, 3);
    const auto out = propagate(fused_from(f), DynamicGraph(1, GraphConfig{}), cfg);
    for (double v : out.vectors.data()) CHECK(v == 0.0);
  }
  SUBCASE("identical inputs become zero") {
    Matrix f(5, 4);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t c = 0; c < 4; ++c) f(i, c) = 0.25 * static_cast<double>(c + 1);
    const auto out = propagate(fused_from(f), chain(5, 0.7), cfg);
    for (double v : out.vectors.data()) CHECK(std::abs(v) < 1e-15);
  }
  SUBCASE("no edges means pure centering") {
    const Matrix f = testing::random_matrix(6, 4, 5);
    const auto out = propagate(fused_from(f), DynamicGraph(6, GraphConfig{}), cfg);
    for (std::size_t c = 0; c < 4; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < 6; ++i) mean += f(i, c);
      mean /= 6.0;
      for (std::size_t i = 0; i < 6; ++i) CHECK(out.vectors(i, c) == doctest::Approx(f(i, c) - mean).epsilon(1e-14));
    }
  }
  SUBCASE("dimension checks") {
    const Matrix f = testing::random_matrix(3, 5, 5);
    CHECK_THROWS_AS(propagate(fused_from(f), chain(3, 0.5), cfg), Error);
    CHECK_THROWS_AS(propagate(fused_from(testing::random_matrix(4, 4, 1)), chain(3, 0.5), cfg), Error);
  }
}

TEST_CASE("centering, finiteness and determinism on random inputs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t t = 2 + seed % 40;
    auto f = testing::random_features(t, 500 + seed);
    GraphConfig gc;
    gc.window = 1 + seed % 10;
    const auto g = build_graph(f, gc);
    FusedFeatures fused = fuse(f, 0.75);
    // Spread components over [-10, 10].
    for (double& v : fused.vectors.data()) v = std::clamp(v * (1.0 + static_cast<double>(seed % 20) * 10.0), -10.0, 10.0);
    AttentionConfig cfg;
    cfg.seed = seed % 3;
    cfg.iterations = 1 + seed % 2;
    const auto out = propagate(fused, g, cfg);
    CHECK(out.iterations_applied == cfg.iterations);
    for (std::size_t c = 0; c < kFusedDim; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < t; ++i) mean += out.vectors(i, c);
      CHECK(std::abs(mean / static_cast<double>(t)) < 1e-6);
    }
    bool finite = true;
    for (double v : out.vectors.data()) finite = finite && std::isfinite(v);
    CHECK(finite);
    if (seed % 25 == 0) CHECK(propagate(fused, g, cfg).vectors == out.vectors);
  }
}

TEST_CASE("gamma changes propagation through edge weights") {
  const auto f = testing::random_features(30, 77);
  GraphConfig a, b;
  a.gamma = 0.0;
  b.gamma = 0.6;
  const auto fused = fuse(f, 0.75);
  AttentionConfig cfg;
  const auto pa = propagate(fused, build_graph(f, a), cfg);
  const auto pb = propagate(fused, build_graph(f, b), cfg);
  CHECK_FALSE(pa.vectors == pb.vectors);
}

TEST_CASE("similarity matrix") {
  const Matrix f = testing::random_matrix(5, 3, 2);
  const Matrix s = cosine_similarity_matrix(f, 1, 4);
  REQUIRE(s.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s(i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  }
  CHECK_THROWS_AS(cosine_similarity_matrix(f, 3, 6), Error);
}
