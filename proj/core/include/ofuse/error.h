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

#ifndef OFUSE_ERROR_H_
#define OFUSE_ERROR_H_

#include <stdexcept>
#include <string>

namespace ofuse {

// Broad failure classes. The CLI maps these onto exit codes, so every throw
// site in the library picks exactly one.
enum class ErrorKind {
  kDomain,   // argument outside the operation's domain
  kShape,    // mismatched sizes or dimensions
  kConfig,   // invalid configuration
  kSchema,   // malformed input file layout
  kData,     // malformed input record
  kNumeric,  // non-convergence, singular system, NaN
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) Fail(kind, message);
}

}  // namespace ofuse

#endif  // OFUSE_ERROR_H_
