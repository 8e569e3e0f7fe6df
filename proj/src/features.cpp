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

#include "eventvad/features.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "eventvad/error.hpp"
#include "eventvad/rng.hpp"

namespace eventvad {
namespace {

constexpr std::array<char, 8> kMagic = {'E', 'V', 'A', 'D', 'F', 'E', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 8 + 4 * 4 + 4;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

double l2_norm(std::span<const float> v) {
  double sum = 0.0;
  for (float x : v) sum += static_cast<double>(x) * x;
  return std::sqrt(sum);
}

}  // namespace

void validate(const FrameFeatures& frames) {
  if (frames.clip.size() % kClipDim != 0 || frames.flow.size() % kFlowDim != 0) {
    throw Error(ErrorCode::kDimensionMismatch, "payload sizes are not multiples of the feature dims");
  }
  const std::size_t t = frames.frames();
  if (t == 0) throw Error(ErrorCode::kDimensionMismatch, "T=0, at least one frame is required");
  if (frames.flow.size() / kFlowDim != t) {
    std::ostringstream msg;
    msg << "clip has " << t << " frames but flow has " << frames.flow.size() / kFlowDim;
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
  if (!(frames.fps > 0.0f) || !std::isfinite(frames.fps)) {
    throw Error(ErrorCode::kParseError, "fps must be a positive finite number");
  }
  for (std::size_t i = 0; i < t; ++i) {
    const double norm = l2_norm(frames.clip_row(i));
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kUnitNormTolerance) {
      std::ostringstream msg;
      msg << "frame " << i << " clip norm " << norm << " is not within "
          << kUnitNormTolerance << " of 1";
      throw Error(ErrorCode::kNormViolation, msg.str());
    }
    for (float x : frames.flow_row(i)) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNormViolation,
                    "frame " + std::to_string(i) + " flow has a non-finite component");
      }
    }
  }
  for (float x : frames.flow_row(0)) {
    if (x != 0.0f) throw Error(ErrorCode::kNormViolation, "frame 0 flow must be the zero vector");
  }
}

FlowProjector::FlowProjector(std::uint64_t seed) : seed_(seed), matrix_(2, kFlowDim) {
  NormalSampler normal(seed);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < kFlowDim; ++c) matrix_(r, c) = normal();
  for (std::size_t c = 0; c < kFlowDim; ++c) {
    const double norm = std::hypot(matrix_(0, c), matrix_(1, c));
    matrix_(0, c) /= norm;
    matrix_(1, c) /= norm;
  }
}

std::vector<double> normalize_clip(std::span<const double> raw) {
  if (raw.size() != kClipDim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "clip vector has " + std::to_string(raw.size()) + " components, expected 512");
  }
  double sum = 0.0;
  for (double x : raw) sum += x * x;
  const double norm = std::sqrt(sum);
  if (!(norm > kNormGuard)) throw Error(ErrorCode::kZeroVector, "clip embedding has zero norm");
  std::vector<double> out(raw.begin(), raw.end());
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> project_flow(std::span<const double, 2> mean_flow,
                                 const FlowProjector& projector) {
  const Matrix& p = projector.matrix();
  std::vector<double> out(kFlowDim);
  for (std::size_t c = 0; c < kFlowDim; ++c) {
    out[c] = p(0, c) * mean_flow[0] + p(1, c) * mean_flow[1];
  }
  return out;
}

FusedFeatures fuse(const FrameFeatures& frames, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidAlpha, "alpha=" + std::to_string(alpha) + " is outside [0, 1]");
  }
  const std::size_t t = frames.frames();
  FusedFeatures fused{Matrix(t, kFusedDim), alpha};
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < t; ++i) {
    auto out = fused.vectors.row(i);
    auto clip = frames.clip_row(i);
    auto flow = frames.flow_row(i);
    for (std::size_t c = 0; c < kClipDim; ++c) out[c] = alpha * clip[c];
    for (std::size_t c = 0; c < kFlowDim; ++c) out[kClipDim + c] = beta * flow[c];
  }
  return fused;
}

FrameFeatures read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kBadPath, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::string where = path.string() + ": ";

  if (bytes.size() < kMagic.size()) throw Error(ErrorCode::kTruncatedFile, where + "file ends inside the magic");
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorCode::kBadMagic, where + "magic is not EVADFEAT");
  }
  if (bytes.size() < kHeaderBytes) throw Error(ErrorCode::kTruncatedFile, where + "file ends inside the header");

  const std::uint32_t version = get_u32(p + 8);
  if (version != kVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, where + "version=" + std::to_string(version));
  }
  const std::uint32_t t = get_u32(p + 12);
  const std::uint32_t clip_dim = get_u32(p + 16);
  const std::uint32_t flow_dim = get_u32(p + 20);
  if (clip_dim != kClipDim) {
    throw Error(ErrorCode::kDimensionMismatch, where + "clip_dim=" + std::to_string(clip_dim) + " (expected 512)");
  }
  if (flow_dim != kFlowDim) {
    throw Error(ErrorCode::kDimensionMismatch, where + "flow_dim=" + std::to_string(flow_dim) + " (expected 128)");
  }
  if (t == 0) throw Error(ErrorCode::kDimensionMismatch, where + "T=0");

  const std::size_t clip_values = static_cast<std::size_t>(t) * kClipDim;
  const std::size_t flow_values = static_cast<std::size_t>(t) * kFlowDim;
  const std::size_t expected = kHeaderBytes + 4 * (clip_values + flow_values);
  if (bytes.size() < expected) {
    std::ostringstream msg;
    msg << where << "payload has " << bytes.size() - kHeaderBytes << " bytes, T=" << t << " needs "
        << expected - kHeaderBytes;
    throw Error(ErrorCode::kTruncatedFile, msg.str());
  }
  if (bytes.size() > expected) {
    throw Error(ErrorCode::kDimensionMismatch,
                where + std::to_string(bytes.size() - expected) + " trailing bytes after payload");
  }

  FrameFeatures frames;
  frames.video_id = path.stem().string();
  frames.fps = get_f32(p + 24);
  frames.clip.resize(clip_values);
  frames.flow.resize(flow_values);
  const unsigned char* cursor = p + kHeaderBytes;
  for (float& x : frames.clip) { x = get_f32(cursor); cursor += 4; }
  for (float& x : frames.flow) { x = get_f32(cursor); cursor += 4; }

  try {
    validate(frames);
  } catch (const Error& e) {
    throw Error(e.code(), where + e.detail());
  }
  return frames;
}

void write_features(const FrameFeatures& frames, const std::filesystem::path& path) {
  validate(frames);
  std::string out;
  out.reserve(kHeaderBytes + 4 * (frames.clip.size() + frames.flow.size()));
  out.append(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(frames.frames()));
  put_u32(out, static_cast<std::uint32_t>(kClipDim));
  put_u32(out, static_cast<std::uint32_t>(kFlowDim));
  put_f32(out, frames.fps);
  for (float x : frames.clip) put_f32(out, x);
  for (float x : frames.flow) put_f32(out, x);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kBadPath, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kBadPath, "write failed for " + path.string());
}

}  // namespace eventvad
