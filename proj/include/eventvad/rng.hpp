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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace eventvad {

// Standard-normal sampler with a fully specified bit stream:
// std::mt19937_64 seeded with `seed`; each uniform is (x >> 11) * 2^-53;
// pairs (u1, u2) map through Box-Muller as
//   z0 = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), z1 = ... * sin(2 pi u2),
// emitted z0 first. std::normal_distribution is avoided because its output
// differs between standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eventvad
