// Copyright 2026 The qsph Authors
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

// CSV and text helpers. Numbers are written in shortest round-trip form so
// artifacts are byte-stable across runs.

#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "qsph/error.hpp"

namespace qsph::io {

inline std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string fmt(long long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::size_t v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string_view> header) : out_(path) {
    require(out_.good(), ErrorKind::Io, "cannot open '" + path + "' for writing");
    bool first = true;
    for (auto h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }

  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(vals), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  template <typename T>
  static std::string cell(const T& v) {
    return fmt(v);
  }

  std::ofstream out_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Splits a CSV file into rows of cells; the header row is returned first.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

}  // namespace qsph::io
