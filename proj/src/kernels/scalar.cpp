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

#include "photostat/kernels.hpp"

namespace photostat::kernels::detail {

namespace {

void forward(std::span<const double> a, std::size_t stride,
             std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = a.data() + r * stride;
    double acc = 0.0;
    for (std::size_t c = 0; c < stride; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

void backproject(std::span<const double> w, std::size_t stride,
                 std::span<const double> v, std::span<double> out) {
  for (std::size_t c = 0; c < stride; ++c) out[c] = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    const double* row = w.data() + r * stride;
    const double s = v[r];
    for (std::size_t c = 0; c < stride; ++c) out[c] += row[c] * s;
  }
}

double multiply_sum(std::span<double> x, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] *= y[i];
    total += x[i];
  }
  return total;
}

void scale(std::span<double> x, double s) {
  for (double& v : x) v *= s;
}

}  // namespace

const KernelSet kScalar{Backend::Scalar, forward, backproject, multiply_sum, scale};

}  // namespace photostat::kernels::detail
