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

#include <fstream>

#include "doctest.h"
#include "eventvad/boundary_detector.hpp"
#include "eventvad/error.hpp"
#include "eventvad/synth_bench.hpp"
#include "helpers.hpp"

using namespace eventvad;

namespace {

Regime basis_regime(std::size_t length, std::size_t axis) {
  Regime r;
  r.length = length;
  r.clip_anchor.assign(kClipDim, 0.0);
  r.clip_anchor[axis] = 1.0;
  r.flow_anchor.assign(kFlowDim, 0.0);
  return r;
}

}  // namespace

TEST_CASE("truth boundaries are cumulative regime starts") {
  SynthSpec spec;
  spec.regimes = {basis_regime(100, 0)};
  CHECK(generate(spec).truth_boundaries.empty());
  spec.regimes.push_back(basis_regime(100, 1));
  CHECK(generate(spec).truth_boundaries == std::vector<std::size_t>{100});
  spec.regimes.push_back(basis_regime(30, 2));
  const auto v = generate(spec);
  CHECK(v.truth_boundaries == std::vector<std::size_t>{100, 200});
  CHECK(v.features.frames() == 230);
}

TEST_CASE("generated streams satisfy the container contract") {
  PlantedOptions opts;
  opts.frames = 300;
  opts.regimes = 3;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    opts.seed = seed;
    const auto v = generate(planted_spec(opts));
    CHECK_NOTHROW(validate(v.features));
    CHECK(v.truth_boundaries == std::vector<std::size_t>{100, 200});
  }
}

TEST_CASE("generation is deterministic in the seed") {
  PlantedOptions opts;
  opts.frames = 200;
  const auto a = generate(planted_spec(opts));
  const auto b = generate(planted_spec(opts));
  CHECK(a.features == b.features);
  opts.seed = 1;
  CHECK_FALSE(generate(planted_spec(opts)).features == a.features);
}

TEST_CASE("zero-noise orthogonal anchors: analytic divergence trace") {
  SynthSpec spec;
  spec.regimes = {basis_regime(50, 0), basis_regime(70, 1)};
  const auto v = generate(spec);
  const auto fused = fuse(v.features, 0.75);
  const auto s = divergence_signal(fused.vectors);
  REQUIRE(s.size() == 119);
  for (std::size_t i = 0; i < s.size(); ++i) {
    // |delta|^2 = 2 * 0.75^2 and the cosine is 0 across the transition.
    CHECK(s[i] == (i == 49 ? 2.125 : 0.0));
  }
}

TEST_CASE("spec validation") {
  SynthSpec spec;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.regimes = {basis_regime(10, 0)};
  spec.noise_sigma = -1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.noise_sigma = 0.0;
  spec.jitter = 1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.jitter = 0.0;
  spec.regimes[0].clip_anchor[0] = 2.0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("truth json round trip") {
  const auto dir = testing::temp_dir("truth");
  {
    std::ofstream out(dir / "t.json");
    out << truth_json({5, 9});
  }
  CHECK(read_truth(dir / "t.json") == std::vector<std::size_t>{5, 9});
  CHECK(truth_json({}) == "{\"boundaries\":[]}\n");
}
