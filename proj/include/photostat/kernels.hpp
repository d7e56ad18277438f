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

#pragma once

// Inner-loop kernels of the EM iteration.
//
// Matrices are row-major with a row stride padded to a multiple of
// kLaneWidth; padding columns and padding vector entries must be zero. The
// scalar backend is the reference. Vector backends must agree with it to
// rounding (see tests/kernels_test.cpp); each backend reduces in a fixed
// order, so results are reproducible for a given backend.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace photostat::kernels {

inline constexpr std::size_t kLaneWidth = 4;

constexpr std::size_t padded_stride(std::size_t cols) noexcept {
  return (cols + kLaneWidth - 1) / kLaneWidth * kLaneWidth;
}

enum class Backend { Auto, Scalar, Avx2, Neon };

std::string_view to_string(Backend backend) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

struct KernelSet {
  Backend backend;

  /// y[r] = sum_c a[r * stride + c] * x[c] for r < y.size().
  void (*forward)(std::span<const double> a, std::size_t stride,
                  std::span<const double> x, std::span<double> y);

  /// out[c] = sum_r w[r * stride + c] * v[r] for c < out.size() == stride.
  void (*backproject)(std::span<const double> w, std::size_t stride,
                      std::span<const double> v, std::span<double> out);

  /// x[i] *= y[i]; returns the sum of the updated x.
  double (*multiply_sum)(std::span<double> x, std::span<const double> y);

  /// x[i] *= s.
  void (*scale)(std::span<double> x, double s);
};

/// Whether the backend is compiled in and supported by the running CPU.
bool available(Backend backend) noexcept;

/// Auto resolves to the widest available backend. Throws
/// Error{InvalidParameter} for an unavailable explicit choice.
const KernelSet& select(Backend backend);

namespace detail {
extern const KernelSet kScalar;
#if defined(PHOTOSTAT_HAVE_AVX2)
extern const KernelSet kAvx2;
#endif
#if defined(PHOTOSTAT_HAVE_NEON)
extern const KernelSet kNeon;
#endif
}  // namespace detail

}  // namespace photostat::kernels
