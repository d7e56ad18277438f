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

// Plain-text tables.
//
// Scan files hold one record per line, "eta,n0,n_total". Lines starting
// with '#' and blank lines are ignored; fields may be padded with spaces.
// eta is written in shortest round-trip decimal form (at most 17
// significant digits), counts as unsigned integers. Example:
//
//   # photostat efficiency scan v1
//   # eta,n0,n_total
//   0.005,995049,1000000
//   0.01,990123,1000000
//
// Distribution files use the same conventions with records "n,probability"
// for n = 0, 1, 2, ... in order.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "photostat/detector.hpp"
#include "photostat/distribution.hpp"

namespace photostat {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

void write_scan(std::ostream& out, const EfficiencyScan& scan);
/// `source` names the stream in diagnostics ("<source>:<line>: ...").
EfficiencyScan read_scan(std::istream& in, std::string_view source);

void export_scan(const EfficiencyScan& scan, const std::filesystem::path& path);
EfficiencyScan import_scan(const std::filesystem::path& path);

void write_distribution(std::ostream& out, const PhotonDistribution& d);
PhotonDistribution read_distribution(std::istream& in, std::string_view source);
PhotonDistribution import_distribution(const std::filesystem::path& path);

}  // namespace photostat
