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

#include <bit>
#include <cstring>
#include <fstream>

#include "doctest.h"
#include "eventvad/error.hpp"
#include "eventvad/features.hpp"
#include "helpers.hpp"

using namespace eventvad;

namespace {

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

void put_u32(std::string& bytes, std::size_t offset, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) bytes[offset + b] = static_cast<char>((v >> (8 * b)) & 0xff);
}

float get_f32(const std::string& bytes, std::size_t offset) {
  std::uint32_t u = 0;
  for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + b])) << (8 * b);
  return std::bit_cast<float>(u);
}

void put_f32(std::string& bytes, std::size_t offset, float v) { put_u32(bytes, offset, std::bit_cast<std::uint32_t>(v)); }

ErrorCode code_of(const std::filesystem::path& p) {
  try {
    read_features(p);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("read_features accepted a malformed file");
  return ErrorCode::kPrecondition;
}

}  // namespace

TEST_CASE("evf round trip is bit exact") {
  const auto dir = testing::temp_dir("features_rt");
  auto frames = testing::random_features(7, 3);
  frames.fps = 29.97f;
  frames.video_id = "clip";
  write_features(frames, dir / "clip.evf");
  const auto back = read_features(dir / "clip.evf");
  CHECK(back == frames);
  write_features(back, dir / "again.evf");
  CHECK(read_bytes(dir / "clip.evf") == read_bytes(dir / "again.evf"));
}

TEST_CASE("evf header layout") {
  const auto dir = testing::temp_dir("features_layout");
  const auto frames = testing::random_features(2, 1);
  write_features(frames, dir / "v.evf");
  const auto bytes = read_bytes(dir / "v.evf");
  REQUIRE(bytes.size() == 8 + 4 * 4 + 4 + 2 * (kClipDim + kFlowDim) * 4);
  CHECK(bytes.substr(0, 8) == "EVADFEAT");
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);   // version, little-endian
  CHECK(static_cast<unsigned char>(bytes[12]) == 2);  // T
  CHECK(static_cast<unsigned char>(bytes[16]) == 0);  // clip_dim = 512 = 0x200
  CHECK(static_cast<unsigned char>(bytes[17]) == 2);
  CHECK(static_cast<unsigned char>(bytes[20]) == 128);
}

TEST_CASE("malformed containers are rejected with the right code") {
  const auto dir = testing::temp_dir("features_bad");
  const auto frames = testing::random_features(3, 2);
  write_features(frames, dir / "good.evf");
  const std::string good = read_bytes(dir / "good.evf");

  SUBCASE("missing file") { CHECK(code_of(dir / "missing.evf") == ErrorCode::kBadPath); }
  SUBCASE("bad magic") {
    auto b = good;
    b[0] = 'X';
    write_bytes(dir / "m.evf", b);
    CHECK(code_of(dir / "m.evf") == ErrorCode::kBadMagic);
  }
  SUBCASE("short magic") {
    write_bytes(dir / "s.evf", good.substr(0, 5));
    CHECK(code_of(dir / "s.evf") == ErrorCode::kTruncatedFile);
  }
  SUBCASE("short header") {
    write_bytes(dir / "h.evf", good.substr(0, 14));
    CHECK(code_of(dir / "h.evf") == ErrorCode::kTruncatedFile);
  }
  SUBCASE("version") {
    auto b = good;
    put_u32(b, 8, 2);
    write_bytes(dir / "v.evf", b);
    CHECK(code_of(dir / "v.evf") == ErrorCode::kUnsupportedVersion);
  }
  SUBCASE("clip dim") {
    auto b = good;
    put_u32(b, 16, 256);
    write_bytes(dir / "c.evf", b);
    CHECK(code_of(dir / "c.evf") == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("truncated payload") {
    write_bytes(dir / "t.evf", good.substr(0, good.size() - 3));
    CHECK(code_of(dir / "t.evf") == ErrorCode::kTruncatedFile);
  }
  SUBCASE("trailing bytes") {
    write_bytes(dir / "x.evf", good + "junk");
    CHECK(code_of(dir / "x.evf") == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("zero frames") {
    auto b = good.substr(0, 28);
    put_u32(b, 12, 0);
    write_bytes(dir / "z.evf", b);
    CHECK(code_of(dir / "z.evf") == ErrorCode::kDimensionMismatch);
  }
  SUBCASE("clip norm outside tolerance") {
    auto f = frames;
    for (auto& v : f.clip_row(1)) v *= 1.01f;
    CHECK_THROWS_AS(validate(f), Error);
    CHECK_THROWS_AS(write_features(f, dir / "n.evf"), Error);
    auto b = good;
    for (std::size_t c = 0; c < kClipDim; ++c) {
      const std::size_t at = 28 + 4 * (kClipDim + c);
      put_f32(b, at, get_f32(b, at) * 1.01f);
    }
    write_bytes(dir / "n.evf", b);
    CHECK(code_of(dir / "n.evf") == ErrorCode::kNormViolation);
  }
  SUBCASE("nonzero first flow") {
    auto b = good;
    put_f32(b, 28 + 4 * (3 * kClipDim + 5), 0.25f);
    write_bytes(dir / "f.evf", b);
    CHECK(code_of(dir / "f.evf") == ErrorCode::kNormViolation);
  }
}

TEST_CASE("unit norm tolerance is 1e-3") {
  auto f = testing::random_features(2, 9);
  for (auto& v : f.clip_row(1)) v *= 1.0009f;
  CHECK_NOTHROW(validate(f));
  for (auto& v : f.clip_row(1)) v *= 1.0009f / 1.0009f * 1.0011f / 1.0009f;
  CHECK_THROWS_AS(validate(f), Error);
}

TEST_CASE("normalize_clip") {
  std::vector<double> v(kClipDim, 0.0);
  CHECK_THROWS_AS(normalize_clip(v), Error);
  v[3] = 3.0;
  v[7] = 4.0;
  const auto u = normalize_clip(v);
  CHECK(u[3] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(u[7] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("flow projector columns are unit and seeded") {
  const FlowProjector a(5), b(5), c(6);
  CHECK(a.matrix() == b.matrix());
  CHECK_FALSE(a.matrix() == c.matrix());
  REQUIRE(a.matrix().rows() == 2);
  REQUIRE(a.matrix().cols() == kFlowDim);
  for (std::size_t col = 0; col < kFlowDim; ++col) {
    const double n = std::hypot(a.matrix()(0, col), a.matrix()(1, col));
    CHECK(n == doctest::Approx(1.0).epsilon(1e-15));
  }
  const double mean_flow[2] = {0.0, 0.0};
  const auto zero = project_flow(std::span<const double, 2>(mean_flow), a);
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("fuse concatenates the weighted streams") {
  const auto f = testing::random_features(4, 11);
  const auto fused = fuse(f, 0.75);
  REQUIRE(fused.dim() == kFusedDim);
  REQUIRE(fused.frames() == 4);
  CHECK(fused.vectors(2, 10) == 0.75 * static_cast<double>(f.clip_row(2)[10]));
  CHECK(fused.vectors(2, kClipDim + 4) == 0.25 * static_cast<double>(f.flow_row(2)[4]));
  CHECK_THROWS_AS(fuse(f, 1.5), Error);
  CHECK_THROWS_AS(fuse(f, -0.1), Error);
  try {
    fuse(f, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidAlpha);
  }
}
