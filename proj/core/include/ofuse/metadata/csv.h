// Copyright 2026 The Outlier Fusion Authors.
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

#ifndef OFUSE_METADATA_CSV_H_
#define OFUSE_METADATA_CSV_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ofuse {

using CsvRow = std::vector<std::string>;

// Streaming reader for comma-separated text with RFC 4180 quoting: quoted
// fields may hold commas, doubled quotes and line breaks. Accepts LF or
// CRLF and skips a leading UTF-8 byte-order mark.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in);

  // Next record, or nullopt at end of input. Blank lines are skipped.
  // An unterminated quote is a kSchema error.
  std::optional<CsvRow> Next();

  // 1-based physical line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t next_line_ = 1;
  std::size_t record_line_ = 0;
};

// Quotes the field only when it contains a comma, quote or line break.
std::string CsvEscape(std::string_view field);

}  // namespace ofuse

#endif  // OFUSE_METADATA_CSV_H_
