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

#include "eventvad/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "eventvad/error.hpp"
#include "eventvad/synth_bench.hpp"

namespace eventvad {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorCode::kBadPath, "cannot write " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kBadPath, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Runs task(i) for i in [0, n) on up to `jobs` threads. The first exception
// stops new tasks and is rethrown.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Flags that map onto RunConfig keys, in precedence-neutral order.
struct ConfigFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr ConfigFlag kConfigFlags[] = {
    {"--alpha", "alpha", "semantic-motion fusion weight (0.75)"},
    {"--gamma", "gamma", "temporal decay factor (0.6)"},
    {"--window", "window", "graph neighbourhood radius in frames (60)"},
    {"--seed", "seed", "projection seed (0)"},
    {"--k", "k", "query/key dimension (64)"},
    {"--iterations", "iterations", "propagation rounds (1)"},
    {"--w", "w", "smoothing window; filters use w+1 taps (60)"},
    {"--mad-k", "mad_k", "MAD multiplier of the adaptive threshold (3)"},
    {"--min-gap", "min_gap", "candidate merge gap in frames (30)"},
    {"--min-event-len", "min_event_len", "shortest event in frames (16)"},
    {"--fixed-threshold", "fixed_threshold", "ratio threshold replacing the MAD rule"},
    {"--scorer-url", "scorer_url", "scoring service base url, or 'mock'"},
    {"--mock-fixture", "mock_fixture", "JSON fixture for the mock scorer"},
    {"--inflight", "inflight", "scorer requests in flight (4)"},
    {"--max-retries", "max_retries", "retries per scorer stage (3)"},
    {"--jobs", "jobs", "videos processed concurrently (1)"},
};

struct CommonOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool mock_scorer = false;
  CLI::Option* mock_flag = nullptr;
  std::string config_path;

  RunConfig resolve() const {
    std::vector<std::pair<std::string, std::string>> flags;
    for (const auto& f : kConfigFlags) {
      if (options.at(f.key)->count() > 0) flags.emplace_back(f.key, values.at(f.key));
    }
    if (mock_flag->count() > 0) flags.emplace_back("mock_scorer", mock_scorer ? "true" : "false");
    std::optional<fs::path> file;
    if (!config_path.empty()) file = config_path;
    return resolve_config(file, flags);
  }
};

void add_common(CLI::App& app, CommonOptions& common) {
  for (const auto& f : kConfigFlags) {
    common.options[f.key] = app.add_option(f.flag, common.values[f.key], f.help);
  }
  common.mock_flag = app.add_flag("--mock-scorer", common.mock_scorer, "use the in-process mock scorer");
  app.add_option("--config", common.config_path,
                 "key=value or JSON config file (a result JSON's embedded config also works)");
}

nlohmann::ordered_json segmentation_json(const FrameFeatures& frames, const Segmentation& seg,
                                         const RunConfig& cfg) {
  nlohmann::ordered_json out;
  out["video_id"] = frames.video_id;
  out["frames"] = frames.frames();
  out["threshold"] = seg.signal.threshold;
  out["boundaries"] = seg.signal.boundaries;
  out["config"] = to_json(cfg);
  out["seeds"] = seeds_json(cfg);
  return out;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t frames) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig, "similarity range must be FIRST:LAST, got " + text);
  }
  try {
    const auto first = static_cast<std::size_t>(std::stoull(text.substr(0, colon)));
    const auto last = static_cast<std::size_t>(std::stoull(text.substr(colon + 1)));
    if (first >= last || last > frames) {
      throw Error(ErrorCode::kRangeOutOfBounds, "similarity range " + text + " not within [0," +
                                                    std::to_string(frames) + "]");
    }
    return {first, last};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::kInvalidConfig, "similarity range must be FIRST:LAST, got " + text);
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidConfig, std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (values.empty()) throw Error(ErrorCode::kInvalidConfig, std::string(what) + " is empty");
  return values;
}

// ---- commands --------------------------------------------------------------

struct SegmentArgs {
  std::string features;
  std::string out_dir;
  std::string graph_json;
  std::string similarity;
};

int cmd_segment(const SegmentArgs& args, const RunConfig& cfg, std::ostream& out) {
  const FrameFeatures frames = read_features(args.features);
  ProjectionCache cache;
  const Segmentation seg = segment(frames, cfg, cache);
  const std::string report = segmentation_json(frames, seg, cfg).dump(2) + "\n";
  if (args.out_dir.empty()) {
    out << report;
  } else {
    const fs::path dir = args.out_dir;
    write_text(dir / (frames.video_id + ".boundaries.json"), report);
    write_text(dir / (frames.video_id + ".curve.csv"), curve_csv(seg.signal));
    out << "wrote " << (dir / (frames.video_id + ".boundaries.json")).string() << " ("
        << seg.signal.boundaries.size() << " boundaries)\n";
  }
  if (!args.graph_json.empty()) write_text(args.graph_json, seg.graph.to_json());
  if (!args.similarity.empty()) {
    const auto [first, last] = parse_range(args.similarity, frames.frames());
    const fs::path target = args.out_dir.empty()
                                ? fs::path(frames.video_id + ".similarity.json")
                                : fs::path(args.out_dir) / (frames.video_id + ".similarity.json");
    write_text(target, similarity_json(seg.fused.vectors, seg.propagated.vectors, first, last));
  }
  return 0;
}

struct ScoreArgs {
  std::vector<std::string> inputs;
  std::string media;
  std::string out_dir;
};

nlohmann::ordered_json partial_report(const std::string& video_id,
                                      const std::vector<ScoredEvent>& done, const Error& e) {
  nlohmann::ordered_json out;
  out["video_id"] = video_id;
  out["error"] = e.what();
  auto events = nlohmann::ordered_json::array();
  for (const auto& ev : done) {
    nlohmann::ordered_json item;
    item["index"] = ev.unit.index;
    item["start"] = ev.unit.start;
    item["end"] = ev.unit.end;
    item["score"] = ev.score.score;
    item["description"] = ev.score.description;
    events.push_back(std::move(item));
  }
  out["completed_events"] = std::move(events);
  return out;
}

int cmd_score(const ScoreArgs& args, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> inputs(args.inputs.begin(), args.inputs.end());
  const auto files = feature_files(inputs);
  if (files.size() > 1 && args.out_dir.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "scoring several videos needs --out-dir");
  }
  auto scorer = make_scorer(cfg);
  ProjectionCache cache;
  InflightLimiter limiter(cfg.inflight);
  std::vector<std::string> outputs(files.size());
  std::mutex err_mutex;

  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    const FrameFeatures frames = read_features(files[i]);
    std::unique_ptr<DirectoryFrameSource> media;
    if (!args.media.empty()) media = std::make_unique<DirectoryFrameSource>(fs::path(args.media) / frames.video_id);
    const Segmentation seg = segment(frames, cfg, cache);
    try {
      const DetectionResult result = detect(frames, seg, cfg, *scorer, media.get(), &limiter);
      outputs[i] = to_json(result);
      if (!args.out_dir.empty()) write_text(fs::path(args.out_dir) / (frames.video_id + ".json"), outputs[i]);
    } catch (const PartialScoringError& e) {
      const std::string report = partial_report(frames.video_id, e.completed(), e).dump(2) + "\n";
      {
        std::lock_guard lock(err_mutex);
        err << "partial result for " << frames.video_id << ":\n" << report;
      }
      if (!args.out_dir.empty()) {
        write_text(fs::path(args.out_dir) / (frames.video_id + ".partial.json"), report);
      }
      throw;
    }
  });
  if (args.out_dir.empty()) {
    out << outputs.front();
  } else {
    out << "scored " << files.size() << " video(s) into " << args.out_dir << "\n";
  }
  return 0;
}

struct EvaluateArgs {
  std::string results_dir;
  std::string annotations;
  std::string roc_csv;
};

int cmd_evaluate(const EvaluateArgs& args, const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = args.results_dir;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kBadPath, "results dir " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".json" &&
        name.find(".partial.") == std::string::npos && name.find(".boundaries.") == std::string::npos) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kNoResults, "no result JSON files in " + dir.string());
  std::map<std::string, std::vector<double>> scores;
  for (const auto& f : files) {
    DetectionResult result;
    try {
      result = detection_result_from_json(read_text(f));
    } catch (const Error& e) {
      throw Error(e.code(), f.string() + ": " + e.detail());
    }
    scores[result.video_id] = std::move(result.frame_scores);
  }
  const auto truth = read_annotations(args.annotations);
  const MetricReport report = evaluate_corpus(scores, truth);
  auto doc = to_json(report);
  doc["config"] = to_json(cfg);
  out << doc.dump(2) << "\n";
  if (!args.roc_csv.empty()) {
    std::vector<double> all_scores;
    std::vector<int> all_labels;
    for (const auto& [id, s] : scores) {
      const auto labels = truth.at(id).labels();
      all_scores.insert(all_scores.end(), s.begin(), s.end());
      all_labels.insert(all_labels.end(), labels.begin(), labels.end());
    }
    write_text(args.roc_csv, roc_csv(roc_curve(all_scores, all_labels)));
  }
  return 0;
}

struct SweepArgs {
  std::string features_dir;
  std::string annotations;
  std::string alphas;
  std::string gammas;
  std::size_t tolerance = 30;
  std::string output;
};

int cmd_sweep(const SweepArgs& args, const RunConfig& cfg, std::ostream& out) {
  SweepCorpus corpus = load_corpus(args.features_dir);
  SweepGrid grid;
  if (!args.alphas.empty()) grid.alphas = parse_list(args.alphas, "--alphas");
  if (!args.gammas.empty()) grid.gammas = parse_list(args.gammas, "--gammas");
  std::unique_ptr<Scorer> scorer;
  if (cfg.has_scorer()) {
    if (args.annotations.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "a scored sweep needs --annotations");
    }
    corpus.annotations = read_annotations(args.annotations);
    scorer = make_scorer(cfg);
  }
  const SweepResult result = run_sweep(corpus, grid, cfg, scorer.get(), args.tolerance);
  const std::string csv = sweep_csv(result);
  if (args.output.empty()) {
    out << csv;
  } else {
    write_text(args.output, csv);
    out << "wrote " << args.output << "\n";
  }
  return 0;
}

struct SynthArgs {
  std::string out_dir;
  std::size_t videos = 1;
  std::size_t frames = 2000;
  std::size_t regimes = 4;
  double noise_sigma = 0.1;
  double jitter = 0.02;
  std::uint64_t synth_seed = 0;
  std::uint64_t flow_seed = 0;
  std::string prefix = "synth";
  long anomalous_regime = -1;
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
  const fs::path dir = args.out_dir;
  std::string annotations = "video_id,total_frames,start,end\n";
  for (std::size_t v = 0; v < args.videos; ++v) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%03zu", args.prefix.c_str(), v);
    PlantedOptions options;
    options.seed = args.synth_seed + v;
    options.frames = args.frames;
    options.regimes = args.regimes;
    options.noise_sigma = args.noise_sigma;
    options.jitter = args.jitter;
    options.flow_seed = args.flow_seed;
    options.video_id = id;
    const SynthSpec spec = planted_spec(options);
    const SynthVideo video = generate(spec);
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_features(video.features, dir / (std::string(id) + ".evf"));
    write_text(dir / (std::string(id) + ".truth.json"), truth_json(video.truth_boundaries));
    if (args.anomalous_regime >= 0) {
      const auto r = static_cast<std::size_t>(args.anomalous_regime);
      if (r >= spec.regimes.size()) {
        throw Error(ErrorCode::kInvalidConfig, "--anomalous-regime is past the last regime");
      }
      const std::size_t start = r == 0 ? 0 : video.truth_boundaries[r - 1];
      const std::size_t end = start + spec.regimes[r].length;
      annotations += std::string(id) + "," + std::to_string(spec.frames()) + "," +
                     std::to_string(start) + "," + std::to_string(end) + "\n";
    }
  }
  if (args.anomalous_regime >= 0) write_text(dir / "annotations.csv", annotations);
  out << "wrote " << args.videos << " synthetic video(s) to " << dir.string() << "\n";
  return 0;
}

}  // namespace

// ---- sweep -----------------------------------------------------------------

std::vector<fs::path> feature_files(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".evf") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(input);
    }
  }
  if (files.empty()) throw Error(ErrorCode::kNoResults, "no .evf inputs found");
  return files;
}

SweepCorpus load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kBadPath, "features dir " + dir.string() + " does not exist");
  SweepCorpus corpus;
  for (const auto& file : feature_files({dir})) {
    corpus.videos.push_back(read_features(file));
    const fs::path truth = file.parent_path() / (file.stem().string() + ".truth.json");
    if (fs::exists(truth)) corpus.truth_boundaries[corpus.videos.back().video_id] = read_truth(truth);
  }
  return corpus;
}

SweepResult run_sweep(const SweepCorpus& corpus, const SweepGrid& grid, const RunConfig& base,
                      Scorer* scorer, std::size_t tolerance) {
  SweepResult result;
  result.metric = scorer != nullptr ? SweepMetric::kAuc : SweepMetric::kBoundaryF1;
  result.grid = grid;
  if (corpus.videos.empty()) throw Error(ErrorCode::kNoResults, "sweep corpus is empty");
  if (scorer == nullptr && corpus.truth_boundaries.empty()) {
    throw Error(ErrorCode::kNoResults, "boundary-F1 sweep needs <video>.truth.json files");
  }
  const std::size_t cells = grid.alphas.size() * grid.gammas.size();
  const std::size_t videos = corpus.videos.size();
  std::vector<double> f1(cells * videos, 0.0);
  std::vector<std::vector<double>> frame_scores(cells * videos);
  ProjectionCache cache;
  InflightLimiter limiter(base.inflight);

  parallel_for(cells * videos, base.jobs, [&](std::size_t task) {
    const std::size_t cell = task / videos;
    const std::size_t v = task % videos;
    RunConfig cfg = base;
    cfg.gamma = grid.gammas[cell / grid.alphas.size()];
    cfg.alpha = grid.alphas[cell % grid.alphas.size()];
    const FrameFeatures& frames = corpus.videos[v];
    const Segmentation seg = segment(frames, cfg, cache);
    if (scorer != nullptr) {
      frame_scores[task] = detect(frames, seg, cfg, *scorer, nullptr, &limiter).frame_scores;
    } else if (const auto truth = corpus.truth_boundaries.find(frames.video_id);
               truth != corpus.truth_boundaries.end()) {
      f1[task] = boundary_prf(seg.signal.boundaries, truth->second, tolerance).f1;
    }
  });

  result.values.assign(grid.gammas.size(), std::vector<double>(grid.alphas.size(), 0.0));
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double value = 0.0;
    if (scorer != nullptr) {
      std::map<std::string, std::vector<double>> scores;
      for (std::size_t v = 0; v < videos; ++v) {
        scores[corpus.videos[v].video_id] = std::move(frame_scores[cell * videos + v]);
      }
      value = evaluate_corpus(scores, corpus.annotations).auc;
    } else {
      double sum = 0.0;
      std::size_t counted = 0;
      for (std::size_t v = 0; v < videos; ++v) {
        if (corpus.truth_boundaries.count(corpus.videos[v].video_id) == 0) continue;
        sum += f1[cell * videos + v];
        ++counted;
      }
      value = sum / static_cast<double>(counted);
    }
    result.values[cell / grid.alphas.size()][cell % grid.alphas.size()] = value;
  }
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "gamma\\alpha (" << (result.metric == SweepMetric::kAuc ? "auc" : "boundary_f1") << ')';
  for (double a : result.grid.alphas) out << ',' << format_number(a);
  out << '\n';
  for (std::size_t g = 0; g < result.grid.gammas.size(); ++g) {
    out << format_number(result.grid.gammas[g]);
    for (double v : result.values[g]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

// ---- entry point -----------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Training-free video anomaly detection engine", "eventvad"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOptions common;
  add_common(app, common);

  SegmentArgs segment_args;
  auto* segment_cmd = app.add_subcommand("segment", "detect event boundaries in one .evf file");
  segment_cmd->add_option("features", segment_args.features, ".evf feature file")->required();
  segment_cmd->add_option("--out-dir", segment_args.out_dir,
                          "write <id>.boundaries.json and <id>.curve.csv here (default: JSON to stdout)");
  segment_cmd->add_option("--graph-json", segment_args.graph_json, "dump the frame graph as JSON");
  segment_cmd->add_option("--similarity", segment_args.similarity,
                          "FIRST:LAST frame range for the pre/post propagation cosine heat map");

  ScoreArgs score_args;
  auto* score_cmd = app.add_subcommand("score", "segment and score videos into DetectionResult JSON");
  score_cmd->add_option("inputs", score_args.inputs, ".evf files or directories")->required();
  score_cmd->add_option("--media", score_args.media, "directory of <video_id>/<frame:06d>.jpg frames");
  score_cmd->add_option("--out-dir", score_args.out_dir, "write <id>.json per video here");

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "frame-level AUC/AP of scored results");
  evaluate_cmd->add_option("results_dir", evaluate_args.results_dir, "directory of result JSON")->required();
  evaluate_cmd->add_option("annotations", evaluate_args.annotations, "annotation CSV")->required();
  evaluate_cmd->add_option("--roc-csv", evaluate_args.roc_csv, "export corpus ROC points");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "alpha x gamma grid (boundary F1, or AUC with a scorer)");
  sweep_cmd->add_option("features_dir", sweep_args.features_dir, "directory of .evf files")->required();
  sweep_cmd->add_option("--annotations", sweep_args.annotations, "annotation CSV for scored sweeps");
  sweep_cmd->add_option("--alphas", sweep_args.alphas, "comma-separated alphas (0,0.25,0.5,0.75,1)");
  sweep_cmd->add_option("--gammas", sweep_args.gammas, "comma-separated gammas (0,0.2,...,1)");
  sweep_cmd->add_option("--tolerance", sweep_args.tolerance, "boundary match tolerance in frames (30)");
  sweep_cmd->add_option("-o,--output", sweep_args.output, "CSV path (default: stdout)");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "write synthetic .evf streams with planted boundaries");
  synth_cmd->add_option("out_dir", synth_args.out_dir, "output directory")->required();
  synth_cmd->add_option("--videos", synth_args.videos, "number of videos (1)");
  synth_cmd->add_option("--frames", synth_args.frames, "frames per video (2000)");
  synth_cmd->add_option("--regimes", synth_args.regimes, "regimes per video (4)");
  synth_cmd->add_option("--noise-sigma", synth_args.noise_sigma, "per-component noise (0.1)");
  synth_cmd->add_option("--jitter", synth_args.jitter, "spurious perturbation probability (0.02)");
  synth_cmd->add_option("--synth-seed", synth_args.synth_seed, "seed of the first video (0)");
  synth_cmd->add_option("--flow-seed", synth_args.flow_seed, "flow projector seed (0)");
  synth_cmd->add_option("--prefix", synth_args.prefix, "video id prefix (synth)");
  synth_cmd->add_option("--anomalous-regime", synth_args.anomalous_regime,
                        "label this regime anomalous in annotations.csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth_args, out);
    const RunConfig cfg = common.resolve();
    if (segment_cmd->parsed()) return cmd_segment(segment_args, cfg, out);
    if (score_cmd->parsed()) return cmd_score(score_args, cfg, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate_args, cfg, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args, cfg, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace eventvad
