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

#include "doctest.h"
#include "eventvad/dynamic_graph.hpp"
#include "eventvad/error.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace eventvad;

namespace {

FrameFeatures identical_frames(std::size_t t) {
  auto f = testing::random_features(1, 4);
  FrameFeatures out = f;
  out.clip.clear();
  out.flow.clear();
  for (std::size_t i = 0; i < t; ++i) {
    out.clip.insert(out.clip.end(), f.clip.begin(), f.clip.end());
    out.flow.insert(out.flow.end(), f.flow.begin(), f.flow.end());
  }
  return out;
}

}  // namespace

TEST_CASE("edge weight examples") {
  const auto f = testing::random_features(2, 1);
  GraphConfig cfg;
  SUBCASE("identical frames at lag 0 give exactly 1") {
    CHECK(edge_weight(f.clip_row(1), f.clip_row(1), f.flow_row(1), f.flow_row(1), 0, cfg) == 1.0);
  }
  SUBCASE("identical frames, lag 5, gamma 0.6") {
    CHECK(edge_weight(f.clip_row(1), f.clip_row(1), f.flow_row(1), f.flow_row(1), 5, cfg) == 0.25);
  }
  SUBCASE("orthogonal clips, equal flow") {
    std::vector<float> a(kClipDim, 0.0f), b(kClipDim, 0.0f);
    a[0] = 1.0f;
    b[1] = 1.0f;
    CHECK(edge_weight(a, b, f.flow_row(1), f.flow_row(1), 0, cfg) == 0.25);
  }
}

TEST_CASE("build_graph examples") {
  GraphConfig cfg;
  SUBCASE("single frame") {
    const auto g = build_graph(testing::random_features(1, 2), cfg);
    CHECK(g.size() == 1);
    CHECK(g.edge_slots() == 0);
  }
  SUBCASE("window 1 keeps adjacent pairs only") {
    cfg.window = 1;
    const auto g = build_graph(testing::random_features(3, 2), cfg);
    CHECK(g.neighbors(0).size() == 1);
    CHECK(g.neighbors(1).size() == 2);
    CHECK(g.neighbors(2).size() == 1);
    CHECK(g.neighbors(1)[0] == 0);
    CHECK(g.neighbors(1)[1] == 2);
    CHECK_THROWS_AS(g.weight(0, 2), Error);
  }
  SUBCASE("identical frames, gamma 0.6, lag 1") {
    const auto g = build_graph(identical_frames(5), cfg);
    for (std::size_t i = 0; i + 1 < 5; ++i) CHECK(g.weight(i, i + 1) == 0.625);
  }
}

TEST_CASE("graph properties on random videos") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t t = 2 + seed * 4 % 199;
    const auto f = testing::random_features(t, 100 + seed);
    GraphConfig cfg;
    cfg.window = 1 + seed % 70;
    cfg.gamma = 0.1 * static_cast<double>(seed % 11);
    cfg.alpha = 0.05 * static_cast<double>(seed % 21);
    const auto g = build_graph(f, cfg);
    for (std::size_t i = 0; i < t; ++i) {
      const auto nb = g.neighbors(i);
      const auto w = g.weights(i);
      const std::size_t lo = i > cfg.window ? i - cfg.window : 0;
      const std::size_t hi = std::min(t - 1, i + cfg.window);
      REQUIRE(nb.size() == hi - lo);
      for (std::size_t s = 0; s < nb.size(); ++s) {
        const std::size_t j = nb[s];
        CHECK(j != i);
        CHECK(g.weight(j, i) == w[s]);  // exact symmetry
        const std::size_t lag = i > j ? i - j : j - i;
        CHECK(w[s] == edge_weight(f.clip_row(i), f.clip_row(j), f.flow_row(i), f.flow_row(j), lag, cfg));
        CHECK(w[s] <= 1.0);
        CHECK(w[s] > -1.0 / (1.0 + cfg.gamma));
      }
    }
  }
}

TEST_CASE("weights are non-increasing in lag and lag-free at gamma 0") {
  const auto f = testing::random_features(3, 8);
  for (double gamma : {0.0, 0.2, 0.6, 1.0}) {
    GraphConfig cfg;
    cfg.gamma = gamma;
    double previous = edge_weight(f.clip_row(1), f.clip_row(2), f.flow_row(1), f.flow_row(2), 0, cfg);
    for (std::size_t lag = 1; lag <= 60; ++lag) {
      const double w = edge_weight(f.clip_row(1), f.clip_row(2), f.flow_row(1), f.flow_row(2), lag, cfg);
      if (previous >= 0.0) CHECK(w <= previous);
      if (gamma == 0.0) CHECK(w == previous);
      previous = w;
    }
  }
}

TEST_CASE("config validation") {
  GraphConfig cfg;
  cfg.alpha = 1.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.alpha = 0.5;
  cfg.gamma = -0.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.gamma = 0.0;
  cfg.window = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("explicit construction validates and exports json") {
  GraphConfig cfg;
  cfg.window = 1;
  const DynamicGraph g({{1}, {0, 2}, {1}}, {{0.8}, {0.8, 0.5}, {0.5}}, cfg);
  CHECK(g.weight(1, 2) == 0.5);
  const auto doc = nlohmann::json::parse(g.to_json());
  CHECK(doc["n"] == 3);
  REQUIRE(doc["edges"].size() == 2);
  CHECK(doc["edges"][0][0] == 0);
  CHECK(doc["edges"][0][1] == 1);
  CHECK(doc["edges"][1][2] == 0.5);
  CHECK_THROWS_AS(DynamicGraph({{1}, {}}, {{0.8}, {}}, cfg), Error);  // asymmetric
  CHECK_THROWS_AS(DynamicGraph({{0}}, {{1.0}}, cfg), Error);          // self loop
}
