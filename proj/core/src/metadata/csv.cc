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

#include "ofuse/metadata/csv.h"

#include "ofuse/error.h"

namespace ofuse {

CsvReader::CsvReader(std::istream& in) : in_(in) {
  if (in_.peek() == 0xEF) {
    char bom[3];
    in_.read(bom, 3);
    if (!(in_.gcount() == 3 && bom[1] == '\xBB' && bom[2] == '\xBF')) {
      Fail(ErrorKind::kSchema, "input starts with a malformed byte-order mark");
    }
  }
}

std::optional<CsvRow> CsvReader::Next() {
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool any = false;  // consumed at least one character of this record
  record_line_ = next_line_;
  for (;;) {
    const int ch = in_.get();
    if (ch == std::char_traits<char>::eof()) {
      if (in_quotes) {
        Fail(ErrorKind::kSchema,
             "unterminated quoted field starting on line " + std::to_string(record_line_));
      }
      if (!any) return std::nullopt;
      row.push_back(std::move(field));
      return row;
    }
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++next_line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '\r' && in_.peek() == '\n') continue;
    if (c == '\n') {
      ++next_line_;
      if (!any) {
        record_line_ = next_line_;
        continue;
      }
      row.push_back(std::move(field));
      return row;
    }
    any = true;
    if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else {
      field.push_back(c);
    }
  }
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace ofuse
