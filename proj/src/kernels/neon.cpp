// Copyright 2026 The photostat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <arm_neon.h>

#include "photostat/kernels.hpp"

namespace photostat::kernels::detail {

namespace {

// Two float64x2 accumulators cover one kLaneWidth block.

void forward(std::span<const double> a, std::size_t stride,
             std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = a.data() + r * stride;
    float64x2_t lo = vdupq_n_f64(0.0);
    float64x2_t hi = vdupq_n_f64(0.0);
    for (std::size_t c = 0; c < stride; c += 4) {
      lo = vfmaq_f64(lo, vld1q_f64(row + c), vld1q_f64(x.data() + c));
      hi = vfmaq_f64(hi, vld1q_f64(row + c + 2), vld1q_f64(x.data() + c + 2));
    }
    y[r] = vaddvq_f64(vaddq_f64(lo, hi));
  }
}

void backproject(std::span<const double> w, std::size_t stride,
                 std::span<const double> v, std::span<double> out) {
  for (std::size_t c = 0; c < stride; c += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t r = 0; r < v.size(); ++r) {
      acc = vfmaq_n_f64(acc, vld1q_f64(w.data() + r * stride + c), v[r]);
    }
    vst1q_f64(out.data() + c, acc);
  }
}

double multiply_sum(std::span<double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vmulq_f64(vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
    vst1q_f64(x.data() + i, p);
    acc = vaddq_f64(acc, p);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    x[i] *= y[i];
    total += x[i];
  }
  return total;
}

void scale(std::span<double> x, double s) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(x.data() + i, vmulq_n_f64(vld1q_f64(x.data() + i), s));
  for (; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelSet kNeon{Backend::Neon, forward, backproject, multiply_sum, scale};

}  // namespace photostat::kernels::detail
