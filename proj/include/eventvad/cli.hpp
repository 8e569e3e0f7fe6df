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

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "eventvad/config.hpp"
#include "eventvad/evaluation.hpp"
#include "eventvad/features.hpp"
#include "eventvad/pipeline.hpp"

namespace eventvad {

// Entry point of the `eventvad` tool. Returns the process exit code:
// 0 success, 2 input or contract error, 3 scorer transport failure,
// 4 degenerate evaluation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---- sweep -----------------------------------------------------------------

struct SweepGrid {
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> gammas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
};

struct SweepCorpus {
  std::vector<FrameFeatures> videos;
  std::map<std::string, std::vector<std::size_t>> truth_boundaries;  // by video id
  std::map<std::string, GroundTruth> annotations;
};

enum class SweepMetric { kBoundaryF1, kAuc };

struct SweepResult {
  SweepMetric metric = SweepMetric::kBoundaryF1;
  SweepGrid grid;
  std::vector<std::vector<double>> values;  // [gamma][alpha]
};

// Without a scorer every cell is the mean boundary F1 over videos with truth;
// with one, the corpus frame-level AUC against the annotations.
SweepResult run_sweep(const SweepCorpus& corpus, const SweepGrid& grid, const RunConfig& base,
                      Scorer* scorer, std::size_t tolerance = 30);

// Gamma rows by alpha columns, header `gamma\alpha,<alphas...>`.
std::string sweep_csv(const SweepResult& result);

// *.evf files of a directory (sorted) or the paths themselves.
std::vector<std::filesystem::path> feature_files(const std::vector<std::filesystem::path>& inputs);

// Loads every .evf in `dir`, with <stem>.truth.json where present.
SweepCorpus load_corpus(const std::filesystem::path& dir);

}  // namespace eventvad
