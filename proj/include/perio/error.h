// Copyright 2026 The Perio Authors
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

#ifndef PERIO_ERROR_H_
#define PERIO_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perio {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: corpus lines, prediction files, manifests.
class FormatError : public Error {
 public:
  FormatError(const std::string& source, std::size_t line,
              const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input that parses but violates a data contract (duplicate ids, bad spans,
// mismatched note sets, too few notes).
class DataError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration or usage, detected before any work is done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Chat endpoint failure after retries were exhausted.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace perio

#endif  // PERIO_ERROR_H_
