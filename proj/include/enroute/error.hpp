// Copyright 2026 The enroute Authors
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

#ifndef ENROUTE_ERROR_HPP_
#define ENROUTE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace enroute {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the file-format layer; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace enroute

#endif  // ENROUTE_ERROR_HPP_
