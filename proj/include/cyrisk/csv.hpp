// Copyright 2026 The cyrisk Authors
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

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cyrisk {

/// Fixed-point rendering used for every numeric cell and report value.
inline std::string format_fixed(double value, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << value;
  return os.str();
}

/**
 * Deterministic CSV assembly: stable column order is the caller's job; this
 * class pins the rest (6-digit fixed decimals, '\n' newlines, minimal
 * quoting) and replaces the target file atomically via write-temp-then-rename.
 */
class CsvWriter {
 public:
  CsvWriter& cell(std::string_view text) {
    start_cell();
    if (text.find_first_of(",\"\n") != std::string_view::npos) {
      buffer_ += '"';
      for (char c : text) {
        if (c == '"') buffer_ += '"';
        buffer_ += c;
      }
      buffer_ += '"';
    } else {
      buffer_ += text;
    }
    return *this;
  }

  CsvWriter& cell(double value) { return cell(format_fixed(value)); }

  CsvWriter& end_row() {
    buffer_ += '\n';
    row_open_ = false;
    return *this;
  }

  const std::string& str() const { return buffer_; }

  void write_atomic(const std::filesystem::path& path) const {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << buffer_;
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  void start_cell() {
    if (row_open_) buffer_ += ',';
    row_open_ = true;
  }

  std::string buffer_;
  bool row_open_ = false;
};

}  // namespace cyrisk
