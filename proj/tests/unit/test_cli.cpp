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
#include <sstream>

#include "doctest.h"
#include "eventvad/cli.hpp"
#include "eventvad/error.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace eventvad;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "eventvad");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("segment a two-regime synthetic file") {
  const auto dir = testing::temp_dir("cli_segment");
  REQUIRE(run({"synth", dir.string(), "--frames", "1000", "--regimes", "2", "--noise-sigma", "0",
               "--jitter", "0"}).code == 0);
  const auto r = run({"segment", (dir / "synth_000.evf").string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["boundaries"].size() == 1);
  const auto b = doc["boundaries"][0].get<long>();
  CHECK(std::abs(b - 500) <= 30);
  CHECK(doc["config"]["gamma"] == 0.6);
  CHECK(doc.contains("seeds"));

  const auto files = run({"segment", (dir / "synth_000.evf").string(), "--out-dir", (dir / "out").string(),
                          "--graph-json", (dir / "g.json").string(), "--similarity", "490:510"});
  REQUIRE(files.code == 0);
  CHECK(std::filesystem::exists(dir / "out" / "synth_000.boundaries.json"));
  CHECK(slurp(dir / "out" / "synth_000.curve.csv").rfind("index,raw,smoothed,ratio", 0) == 0);
  const auto sim = nlohmann::json::parse(slurp(dir / "out" / "synth_000.similarity.json"));
  CHECK(sim["pre"].size() == 20);
  CHECK(nlohmann::json::parse(slurp(dir / "g.json"))["n"] == 1000);
}

TEST_CASE("segment edge cases") {
  const auto dir = testing::temp_dir("cli_segment_edges");
  auto one = testing::random_features(1, 3);
  one.video_id = "one";
  write_features(one, dir / "one.evf");
  const auto r = run({"segment", (dir / "one.evf").string()});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["boundaries"].empty());
  const auto missing = run({"segment", (dir / "missing.evf").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("BadPath") != std::string::npos);
  CHECK(run({"segment", (dir / "one.evf").string(), "--alpha", "2"}).code == 2);
  CHECK(run({"segment", (dir / "one.evf").string(), "--no-such-flag"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("score with the mock scorer is deterministic") {
  const auto dir = testing::temp_dir("cli_score");
  REQUIRE(run({"synth", dir.string(), "--videos", "2", "--frames", "300", "--regimes", "3"}).code == 0);
  const auto a = run({"score", (dir / "synth_000.evf").string(), "--mock-scorer"});
  const auto b = run({"score", (dir / "synth_000.evf").string(), "--mock-scorer"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["frame_scores"].size() == 300);
  CHECK(doc["config"]["scorer_url"] == "mock");

  write(dir / "result.json", a.out);
  const auto again = run({"score", (dir / "synth_000.evf").string(), "--config", (dir / "result.json").string()});
  CHECK(again.out == a.out);

  const auto batch = run({"score", dir.string(), "--mock-scorer", "--out-dir", (dir / "res").string(), "--jobs", "2"});
  CHECK(batch.code == 0);
  CHECK(slurp(dir / "res" / "synth_000.json") == a.out);
  CHECK(std::filesystem::exists(dir / "res" / "synth_001.json"));
  CHECK(run({"score", dir.string(), "--mock-scorer"}).code == 2);  // several videos need --out-dir
  CHECK(run({"score", (dir / "synth_000.evf").string()}).code == 2);  // no scorer configured
}

TEST_CASE("short video without boundaries is one event") {
  const auto dir = testing::temp_dir("cli_short");
  auto f = testing::random_features(10, 1);
  f.video_id = "ten";
  write_features(f, dir / "ten.evf");
  const auto r = run({"score", (dir / "ten.evf").string(), "--mock-scorer"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["events"].size() == 1);
  CHECK(doc["frame_scores"] == nlohmann::json(std::vector<double>(10, 0.5)));
}

TEST_CASE("scorer down exits 3 with a partial report") {
  const auto dir = testing::temp_dir("cli_down");
  auto f = testing::random_features(10, 1);
  f.video_id = "ten";
  write_features(f, dir / "ten.evf");
  const auto r = run({"score", (dir / "ten.evf").string(), "--scorer-url", "http://127.0.0.1:9",
                      "--max-retries", "0", "--out-dir", (dir / "res").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("completed_events") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "res" / "ten.partial.json"));
}

TEST_CASE("evaluate") {
  const auto dir = testing::temp_dir("cli_evaluate");
  std::filesystem::create_directories(dir / "res");
  write(dir / "res" / "v.json",
        R"({"video_id":"v","fps":30,"events":[],"frame_scores":[0.1,0.4,0.35,0.8]})");
  write(dir / "ann.csv", "video_id,total_frames,start,end\nv,4,2,4\n");
  const auto r = run({"evaluate", (dir / "res").string(), (dir / "ann.csv").string(), "--roc-csv",
                      (dir / "roc.csv").string()});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["auc"] == 0.75);
  CHECK(doc["n_frames"] == 4);
  CHECK(doc["n_positive"] == 2);
  CHECK(std::filesystem::exists(dir / "roc.csv"));

  write(dir / "normal.csv", "v,4\n");
  const auto degenerate = run({"evaluate", (dir / "res").string(), (dir / "normal.csv").string()});
  CHECK(degenerate.code == 4);
  CHECK(degenerate.err.find("DegenerateLabels") != std::string::npos);

  std::filesystem::create_directories(dir / "empty");
  const auto none = run({"evaluate", (dir / "empty").string(), (dir / "ann.csv").string()});
  CHECK(none.code == 2);
  CHECK(none.err.find("NoResults") != std::string::npos);
}

TEST_CASE("sweep grid shapes") {
  const auto dir = testing::temp_dir("cli_sweep");
  REQUIRE(run({"synth", dir.string(), "--frames", "200", "--regimes", "2"}).code == 0);
  const auto custom = run({"sweep", dir.string(), "--alphas", "0.5,0.75", "--gammas", "0,0.6"});
  REQUIRE(custom.code == 0);
  std::istringstream lines(custom.out);
  std::string header, line;
  std::getline(lines, header);
  CHECK(header == "gamma\\alpha (boundary_f1),0.5,0.75");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 2);
  }
  CHECK(rows == 2);
  CHECK(run({"sweep", dir.string(), "--alphas", "a,b"}).code == 2);
}
