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

// Serial reference vs OpenMP kernel timings on a planted synthetic stream.
// Set OMP_NUM_THREADS to vary the parallel side.

#include <benchmark/benchmark.h>

#include <map>

#include "eventvad/boundary_detector.hpp"
#include "eventvad/dynamic_graph.hpp"
#include "eventvad/graph_attention.hpp"
#include "eventvad/synth_bench.hpp"

using namespace eventvad;

namespace {

struct Fixture {
  FrameFeatures frames;
  FusedFeatures fused;
  DynamicGraph graph;
  AttentionConfig attention;
  Projections projections;
  Matrix propagated;
};

const Fixture& fixture(std::size_t frames) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(frames);
  if (it != cache.end()) return it->second;
  PlantedOptions opts;
  opts.frames = frames;
  Fixture f;
  f.frames = generate(planted_spec(opts)).features;
  f.fused = fuse(f.frames, 0.75);
  f.graph = build_graph(f.frames, GraphConfig{});
  f.projections = make_projections(f.attention);
  f.propagated = propagate(f.fused, f.graph, f.attention, f.projections).vectors;
  return cache.emplace(frames, std::move(f)).first->second;
}

void BM_BuildGraph(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(f.frames, GraphConfig{}));
}

void BM_BuildGraphSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::build_graph(f.frames, GraphConfig{}));
}

void BM_Multiply(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(multiply(f.fused.vectors, f.projections.value));
}

void BM_MultiplySerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::multiply(f.fused.vectors, f.projections.value));
}

void BM_Propagate(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(f.fused, f.graph, f.attention, f.projections));
}

void BM_PropagateSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(reference::propagate(f.fused, f.graph, f.attention, f.projections));
}

void BM_Divergence(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(divergence_signal(f.propagated));
}

void BM_DivergenceSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::divergence_signal(f.propagated));
}

}  // namespace

BENCHMARK(BM_BuildGraph)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildGraphSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multiply)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplySerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Propagate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PropagateSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Divergence)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DivergenceSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
