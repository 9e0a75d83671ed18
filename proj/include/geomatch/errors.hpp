// Copyright 2026 The Geomatch Authors.
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

#ifndef GEOMATCH_ERRORS_HPP_
#define GEOMATCH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace geomatch {

// Malformed or inconsistent caller input (dimension mismatch, bad file,
// nonpositive supply). The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition of a data-structure operation was violated,
// e.g. linking a node that is not a tree root.
class UsageError : public std::logic_error {
 public:
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// An internal invariant failed (flow conservation, accounting mismatch).
// The CLI maps this to exit code 3.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace geomatch

#endif  // GEOMATCH_ERRORS_HPP_
