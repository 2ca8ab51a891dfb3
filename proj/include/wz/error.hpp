// Copyright 2026 The wzsim Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace wz {

/// Invalid user-supplied parameters (maps to CLI exit code 2).
class ValidationError : public std::invalid_argument {
  public:
    explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

/// A dense or state-vector allocation would exceed a configured guard (exit code 3).
class ResourceError : public std::length_error {
  public:
    explicit ResourceError(const std::string &what) : std::length_error(what) {}
};

/// A numerical invariant was violated at run time (exit code 4).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace wz
