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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eventvad/boundary_detector.hpp"
#include "eventvad/dynamic_graph.hpp"
#include "eventvad/graph_attention.hpp"

namespace eventvad {

inline constexpr const char* kScorerUrlEnv = "EVENTVAD_SCORER_URL";

struct RunConfig {
  double alpha = 0.75;
  double gamma = 0.6;
  std::size_t window = 60;
  std::uint64_t seed = 0;
  std::size_t k = 64;
  std::size_t iterations = 1;
  std::size_t w = 60;
  double mad_k = 3.0;
  std::size_t min_gap = 30;
  std::size_t min_event_len = 16;
  std::optional<double> fixed_threshold;
  std::string scorer_url;  // empty: no scorer configured
  bool mock_scorer = false;
  std::string mock_fixture;
  std::size_t inflight = 4;
  std::size_t max_retries = 3;
  std::size_t jobs = 1;  // execution only; not part of provenance

  GraphConfig graph() const;
  AttentionConfig attention() const;
  BoundaryConfig boundary() const;

  bool has_scorer() const noexcept { return mock_scorer || !scorer_url.empty(); }

  // Re-runs every module-level validation; throws Error(kInvalidConfig).
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Keys accepted by set_option and in config files.
const std::vector<std::string>& config_keys();

// Sets one field from its textual value; throws Error(kInvalidConfig) for
// unknown keys or malformed values.
void set_option(RunConfig& cfg, const std::string& key, const std::string& value);

// Applies a config file: `key = value` lines (# comments), a JSON object of
// keys, or a result JSON whose "config" member holds one.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source);
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc);

// Defaults, then the environment, then `file` if given, then `flags` in order.
RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& flags);

// Provenance snapshot: every field that affects outputs, in a fixed order.
nlohmann::ordered_json to_json(const RunConfig& cfg);
nlohmann::ordered_json seeds_json(const RunConfig& cfg);

}  // namespace eventvad
