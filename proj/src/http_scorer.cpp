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

#include "eventvad/http_scorer.hpp"

#include <sstream>

#include "httplib.h"

namespace eventvad {

std::string base64_encode(std::string_view bytes) {
  return httplib::detail::base64_encode(std::string(bytes));
}

HttpScorer::HttpScorer(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  const auto scheme = base_url_.find("://");
  if (scheme == std::string::npos || base_url_.compare(0, scheme, "http") != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "scorer url must look like http://host:port, got '" + base_url_ + "'");
  }
  const auto path = base_url_.find('/', scheme + 3);
  origin_ = base_url_.substr(0, path);
  if (path != std::string::npos) prefix_ = base_url_.substr(path);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

nlohmann::json HttpScorer::post(const std::string& route, const std::string& body) const {
  // One client per call keeps the scorer safe to share across worker threads.
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  const auto response = client.Post(prefix_ + route, body, "application/json");
  if (!response) {
    throw Error(ErrorCode::kScorerUnavailable,
                "POST " + base_url_ + route + ": " + httplib::to_string(response.error()));
  }
  if (response->status != 200) {
    throw Error(ErrorCode::kScorerUnavailable,
                "POST " + base_url_ + route + ": HTTP " + std::to_string(response->status));
  }
  try {
    return nlohmann::json::parse(response->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kScorerUnavailable,
                "POST " + base_url_ + route + ": response is not JSON (" + e.what() + ")");
  }
}

std::string HttpScorer::describe(const DescribeRequest& request) {
  const auto reply = post("/v1/describe", to_json(request).dump());
  const auto field = reply.find("description");
  if (field == reply.end() || !field->is_string()) {
    throw Error(ErrorCode::kScorerUnavailable, "/v1/describe reply has no string 'description'");
  }
  return field->get<std::string>();
}

std::string HttpScorer::score(const ScoreRequest& request) {
  const auto reply = post("/v1/score", to_json(request).dump());
  const auto field = reply.find("score");
  if (field == reply.end()) return reply.dump();
  if (field->is_string()) return field->get<std::string>();
  if (field->is_number()) {
    std::ostringstream text;
    text.precision(17);
    text << field->get<double>();
    return text.str();
  }
  return field->dump();
}

}  // namespace eventvad
