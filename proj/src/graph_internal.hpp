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

namespace eventvad::detail {

struct GraphLayout {
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> targets;
};

GraphLayout windowed_layout(std::size_t n, std::size_t window);

void fill_graph_row(const FrameFeatures& frames, std::span<const double> clip_sq_norms,
                    const GraphLayout& layout, const GraphConfig& config, std::size_t i,
                    std::span<double> weights);

}  // namespace eventvad::detail
