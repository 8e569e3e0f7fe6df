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

// Inner loops shared by the parallel kernels and their serial references.
// Both paths call these so that per-element arithmetic is identical and the
// results compare bit for bit.

#include <cmath>
#include <cstddef>
#include <span>

#include "eventvad/matrix.hpp"

namespace eventvad::detail {

template <typename T>
double squared_norm(std::span<const T> v) {
  double sum = 0.0;
  for (T x : v) sum += static_cast<double>(x) * static_cast<double>(x);
  return sum;
}

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) sum += static_cast<double>(a[c]) * static_cast<double>(b[c]);
  return sum;
}

template <typename T>
double squared_distance(std::span<const T> a, std::span<const T> b) {
  double sum = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double d = static_cast<double>(a[c]) - static_cast<double>(b[c]);
    sum += d * d;
  }
  return sum;
}

// Cosine from a dot product and the two squared norms; exactly 1 for a
// vector with itself. Zero-norm inputs give 0.
inline double cosine_from_parts(double dot_ab, double sq_a, double sq_b, double guard) {
  const double denom = std::sqrt(sq_a * sq_b);
  const double c = dot_ab / (denom > guard ? denom : guard);
  return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

inline double edge_weight_from_parts(double cosine, double flow_distance, std::size_t lag,
                                     double alpha, double gamma) {
  return (alpha * cosine + (1.0 - alpha) * std::exp(-flow_distance)) /
         (1.0 + gamma * static_cast<double>(lag));
}

// dst = src * b for one row vector; i-k-j order so the inner loop
// vectorises.
inline void project_row(std::span<const double> src, const Matrix& b, std::span<double> dst) {
  for (double& x : dst) x = 0.0;
  for (std::size_t p = 0; p < src.size(); ++p) {
    const double s = src[p];
    if (s == 0.0) continue;
    const double* brow = b.row(p).data();
    double* d = dst.data();
    const std::size_t n = b.cols();
    for (std::size_t j = 0; j < n; ++j) d[j] += s * brow[j];
  }
}

inline void multiply_row(const Matrix& a, const Matrix& b, std::size_t i, Matrix& out) {
  project_row(a.row(i), b, out.row(i));
}

}  // namespace eventvad::detail
