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

#include "eventvad/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eventvad/error.hpp"

namespace eventvad {

GraphConfig RunConfig::graph() const { return {alpha, gamma, window}; }

AttentionConfig RunConfig::attention() const {
  AttentionConfig cfg;
  cfg.seed = seed;
  cfg.k = k;
  cfg.iterations = iterations;
  return cfg;
}

BoundaryConfig RunConfig::boundary() const {
  BoundaryConfig cfg;
  cfg.w = w;
  cfg.mad_k = mad_k;
  cfg.min_gap = min_gap;
  cfg.min_event_len = min_event_len;
  cfg.fixed_threshold = fixed_threshold;
  return cfg;
}

void RunConfig::validate() const {
  graph().validate();
  attention().validate();
  boundary().validate();
  if (inflight == 0) throw Error(ErrorCode::kInvalidConfig, "inflight must be >= 1");
  if (jobs == 0) throw Error(ErrorCode::kInvalidConfig, "jobs must be >= 1");
  if (mock_scorer && !scorer_url.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "choose either a scorer url or the mock scorer");
  }
  if (!mock_fixture.empty() && !mock_scorer) {
    throw Error(ErrorCode::kInvalidConfig, "mock_fixture requires the mock scorer");
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "alpha",  "gamma",         "window",          "seed",       "k",
      "iterations", "w",         "mad_k",           "min_gap",    "min_event_len",
      "fixed_threshold", "scorer_url", "mock_scorer", "mock_fixture", "inflight",
      "max_retries", "jobs"};
  return keys;
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (value.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kInvalidConfig, key + ": cannot parse '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::kInvalidConfig, key + ": expected a boolean, got '" + value + "'");
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

void set_option(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string value = trim(raw_value);
  if (key == "alpha") {
    cfg.alpha = parse_number<double>(key, value);
  } else if (key == "gamma") {
    cfg.gamma = parse_number<double>(key, value);
  } else if (key == "window") {
    cfg.window = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "k") {
    cfg.k = parse_number<std::size_t>(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_number<std::size_t>(key, value);
  } else if (key == "w") {
    cfg.w = parse_number<std::size_t>(key, value);
  } else if (key == "mad_k") {
    cfg.mad_k = parse_number<double>(key, value);
  } else if (key == "min_gap") {
    cfg.min_gap = parse_number<std::size_t>(key, value);
  } else if (key == "min_event_len") {
    cfg.min_event_len = parse_number<std::size_t>(key, value);
  } else if (key == "fixed_threshold") {
    if (value.empty() || value == "none" || value == "null") {
      cfg.fixed_threshold.reset();
    } else {
      cfg.fixed_threshold = parse_number<double>(key, value);
    }
  } else if (key == "scorer_url") {
    if (value == "mock") {
      cfg.mock_scorer = true;
      cfg.scorer_url.clear();
    } else {
      cfg.scorer_url = value;
      if (!value.empty()) cfg.mock_scorer = false;
    }
  } else if (key == "mock_scorer") {
    cfg.mock_scorer = parse_bool(key, value);
    if (cfg.mock_scorer) cfg.scorer_url.clear();
  } else if (key == "mock_fixture") {
    cfg.mock_fixture = value;
  } else if (key == "inflight") {
    cfg.inflight = parse_number<std::size_t>(key, value);
  } else if (key == "max_retries") {
    cfg.max_retries = parse_number<std::size_t>(key, value);
  } else if (key == "jobs") {
    cfg.jobs = parse_number<std::size_t>(key, value);
  } else {
    throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
  }
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& doc) {
  const nlohmann::json& body = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
  if (!body.is_object()) throw Error(ErrorCode::kInvalidConfig, "config JSON must be an object");
  for (const auto& [key, value] : body.items()) {
    std::string text;
    if (value.is_null()) {
      text = "none";
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number_float()) {
      std::ostringstream out;
      out.precision(17);
      out << value.get<double>();
      text = out.str();
    } else {
      text = value.dump();
    }
    set_option(cfg, key, text);
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& source) {
  const std::string stripped = trim(text);
  if (!stripped.empty() && stripped.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(stripped);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, source + ": " + e.what());
    }
    try {
      apply_config_json(cfg, doc);
    } catch (const Error& e) {
      throw Error(e.code(), source + ": " + e.detail());
    }
    return;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_option(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(line_no) + ": " + e.detail());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kBadPath, "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  apply_config_text(cfg, text.str(), path.string());
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& flags) {
  RunConfig cfg;
  if (const char* env = std::getenv(kScorerUrlEnv); env != nullptr && *env != '\0') {
    set_option(cfg, "scorer_url", env);
  }
  if (file) apply_config_file(cfg, *file);
  for (const auto& [key, value] : flags) set_option(cfg, key, value);
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["alpha"] = cfg.alpha;
  out["gamma"] = cfg.gamma;
  out["window"] = cfg.window;
  out["seed"] = cfg.seed;
  out["k"] = cfg.k;
  out["iterations"] = cfg.iterations;
  out["w"] = cfg.w;
  out["mad_k"] = cfg.mad_k;
  out["min_gap"] = cfg.min_gap;
  out["min_event_len"] = cfg.min_event_len;
  out["fixed_threshold"] =
      cfg.fixed_threshold ? nlohmann::ordered_json(*cfg.fixed_threshold) : nlohmann::ordered_json(nullptr);
  out["scorer_url"] = cfg.mock_scorer ? std::string("mock") : cfg.scorer_url;
  out["mock_fixture"] = cfg.mock_fixture;
  out["inflight"] = cfg.inflight;
  out["max_retries"] = cfg.max_retries;
  return out;
}

nlohmann::ordered_json seeds_json(const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["projection_seed"] = cfg.seed;
  return out;
}

}  // namespace eventvad
