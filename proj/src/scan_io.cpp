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

#include "photostat/scan_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "photostat/error.hpp"

namespace photostat {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Data lines of a table with their 1-based line numbers, split on commas.
struct Record {
  std::size_t line;
  std::vector<std::string_view> fields;
};

class TableReader {
 public:
  TableReader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  bool next(Record& record) {
    while (std::getline(in_, buffer_)) {
      ++line_;
      const std::string_view body = trim(buffer_);
      if (body.empty() || body.front() == '#') continue;
      record.line = line_;
      record.fields.clear();
      std::size_t start = 0;
      for (;;) {
        const auto comma = body.find(',', start);
        record.fields.push_back(trim(body.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      return true;
    }
    if (in_.bad()) throw Error(ErrorKind::Io, std::string(source_) + ": read failure");
    return false;
  }

  [[noreturn]] void fail(ErrorKind kind, std::size_t line, const std::string& what) const {
    throw Error(kind, std::string(source_) + ":" + std::to_string(line) + ": " + what);
  }

  template <typename T>
  T parse(const Record& r, std::size_t field, const char* name) const {
    const std::string_view text = r.fields[field];
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      fail(ErrorKind::MalformedFile, r.line,
           std::string("field ") + std::to_string(field + 1) + " (" + name + "): cannot parse '" +
               std::string(text) + "'");
    }
    return value;
  }

 private:
  std::istream& in_;
  std::string_view source_;
  std::string buffer_;
  std::size_t line_ = 0;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_scan(std::ostream& out, const EfficiencyScan& scan) {
  out << "# photostat efficiency scan v1\n# eta,n0,n_total\n";
  for (const ScanPoint& p : scan.points()) {
    out << format_double(p.eta) << ',' << p.n0 << ',' << p.n_total << '\n';
  }
}

EfficiencyScan read_scan(std::istream& in, std::string_view source) {
  TableReader reader(in, source);
  std::vector<ScanPoint> points;
  std::vector<std::size_t> lines;
  Record r;
  while (reader.next(r)) {
    if (r.fields.size() != 3) {
      reader.fail(ErrorKind::MalformedFile, r.line,
                  "expected 3 fields (eta,n0,n_total), found " + std::to_string(r.fields.size()));
    }
    ScanPoint p{reader.parse<double>(r, 0, "eta"), reader.parse<std::uint64_t>(r, 1, "n0"),
                reader.parse<std::uint64_t>(r, 2, "n_total")};
    if (!(p.eta >= 0.0 && p.eta <= 1.0)) {
      reader.fail(ErrorKind::InvariantViolation, r.line, "eta " + std::string(r.fields[0]) + " outside [0, 1]");
    }
    if (p.n_total == 0) reader.fail(ErrorKind::InvariantViolation, r.line, "n_total must be positive");
    if (p.n0 > p.n_total) reader.fail(ErrorKind::InvariantViolation, r.line, "n0 exceeds n_total");
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].eta == p.eta) {
        reader.fail(ErrorKind::InvariantViolation, r.line,
                    "duplicate eta (first seen on line " + std::to_string(lines[i]) + ")");
      }
    }
    points.push_back(p);
    lines.push_back(r.line);
  }
  if (points.size() < 2) {
    throw Error(ErrorKind::InvariantViolation,
                std::string(source) + ": scan needs at least 2 records, found " +
                    std::to_string(points.size()));
  }
  return EfficiencyScan(std::move(points));
}

void export_scan(const EfficiencyScan& scan, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_scan(out, scan);
  finish(out, path);
}

EfficiencyScan import_scan(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_scan(in, path.string());
}

void write_distribution(std::ostream& out, const PhotonDistribution& d) {
  out << "# photostat photon distribution v1\n# n,probability\n";
  for (std::size_t n = 0; n < d.size(); ++n) out << n << ',' << format_double(d[n]) << '\n';
}

PhotonDistribution read_distribution(std::istream& in, std::string_view source) {
  TableReader reader(in, source);
  std::vector<double> probs;
  Record r;
  while (reader.next(r)) {
    if (r.fields.size() != 2) {
      reader.fail(ErrorKind::MalformedFile, r.line,
                  "expected 2 fields (n,probability), found " + std::to_string(r.fields.size()));
    }
    const auto n = reader.parse<std::size_t>(r, 0, "n");
    if (n != probs.size()) {
      reader.fail(ErrorKind::MalformedFile, r.line,
                  "expected n = " + std::to_string(probs.size()) + ", found " + std::to_string(n));
    }
    const double p = reader.parse<double>(r, 1, "probability");
    if (!(p >= 0.0) || !std::isfinite(p)) {
      reader.fail(ErrorKind::InvariantViolation, r.line, "probability must be finite and >= 0");
    }
    probs.push_back(p);
  }
  if (probs.size() < 2) {
    throw Error(ErrorKind::InvariantViolation, std::string(source) + ": distribution needs n_max >= 1");
  }
  return PhotonDistribution(std::move(probs));
}

PhotonDistribution import_distribution(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_distribution(in, path.string());
}

}  // namespace photostat
