/*
 * Copyright 2026 The rankadapt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKADAPT_ERROR_H_
#define RANKADAPT_ERROR_H_

#include <stdexcept>
#include <string>

namespace rankadapt {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: bad file contents, bad arguments, mismatched shapes.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// Well-formed input on which the requested quantity is undefined, e.g. a
// dataset without a single query that has a relevant document.
class Degenerate : public Error {
 public:
  explicit Degenerate(const std::string& what) : Error(what) {}
};

}  // namespace rankadapt

#endif  // RANKADAPT_ERROR_H_
