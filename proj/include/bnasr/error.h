// Copyright 2026 The bnasr Authors.
//
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

#ifndef BNASR_ERROR_H_
#define BNASR_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnasr {

// Malformed input data: manifests, WAV, ARPA, vocab, rule and logit files.
// `line` is 1-based when known, 0 otherwise.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string &what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")"
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A caller passed a value outside an operation's contract.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Reading or writing a file failed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative procedure exceeded its iteration bound.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bnasr

#endif  // BNASR_ERROR_H_
