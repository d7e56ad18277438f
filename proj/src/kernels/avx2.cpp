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

// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "photostat/kernels.hpp"

namespace photostat::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void forward(std::span<const double> a, std::size_t stride,
             std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double* row = a.data() + r * stride;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < stride; c += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x.data() + c), acc);
    }
    y[r] = hsum(acc);
  }
}

void backproject(std::span<const double> w, std::size_t stride,
                 std::span<const double> v, std::span<double> out) {
  for (std::size_t c = 0; c < stride; c += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t r = 0; r < v.size(); ++r) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + r * stride + c),
                            _mm256_set1_pd(v[r]), acc);
    }
    _mm256_storeu_pd(out.data() + c, acc);
  }
}

double multiply_sum(std::span<double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i));
    _mm256_storeu_pd(x.data() + i, p);
    acc = _mm256_add_pd(acc, p);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    x[i] *= y[i];
    total += x[i];
  }
  return total;
}

void scale(std::span<double> x, double s) {
  const std::size_t n = x.size();
  const __m256d f = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x.data() + i, _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), f));
  }
  for (; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelSet kAvx2{Backend::Avx2, forward, backproject, multiply_sum, scale};

}  // namespace photostat::kernels::detail
