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

#include <string>

#include "photostat/error.hpp"
#include "photostat/kernels.hpp"

namespace photostat::kernels {

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::Auto: return "auto";
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
  for (Backend b : {Backend::Auto, Backend::Scalar, Backend::Avx2, Backend::Neon}) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

bool available(Backend backend) noexcept {
  switch (backend) {
    case Backend::Auto:
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(PHOTOSTAT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(PHOTOSTAT_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelSet& select(Backend backend) {
  if (backend == Backend::Auto) {
    if (available(Backend::Avx2)) return select(Backend::Avx2);
    if (available(Backend::Neon)) return select(Backend::Neon);
    return detail::kScalar;
  }
  if (!available(backend)) {
    throw Error(ErrorKind::InvalidParameter,
                "kernel backend '" + std::string(to_string(backend)) +
                    "' is not available on this machine");
  }
  switch (backend) {
#if defined(PHOTOSTAT_HAVE_AVX2)
    case Backend::Avx2: return detail::kAvx2;
#endif
#if defined(PHOTOSTAT_HAVE_NEON)
    case Backend::Neon: return detail::kNeon;
#endif
    default: return detail::kScalar;
  }
}

}  // namespace photostat::kernels
