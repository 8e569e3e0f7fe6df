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

#include <chrono>
#include <string>

#include "eventvad/event_scoring.hpp"

namespace eventvad {

// Client for a scoring service speaking the describe/score JSON protocol:
//   POST /v1/describe -> {"description": string}
//   POST /v1/score    -> {"score": number}
// A string-valued "score" is passed through to parse_score so wordy replies
// go through the same retry path as any other unparseable output.
class HttpScorer final : public Scorer {
 public:
  // base_url is scheme://host[:port], optionally with a path prefix.
  explicit HttpScorer(std::string base_url,
                      std::chrono::milliseconds timeout = std::chrono::seconds(120));

  std::string describe(const DescribeRequest& request) override;
  std::string score(const ScoreRequest& request) override;

  const std::string& base_url() const noexcept { return base_url_; }

 private:
  nlohmann::json post(const std::string& route, const std::string& body) const;

  std::string base_url_;
  std::string origin_;
  std::string prefix_;
  std::chrono::milliseconds timeout_;
};

}  // namespace eventvad
