// Copyright 2026 The Panokit Authors.
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

#ifndef PANOKIT_ERRORS_H_
#define PANOKIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace panokit {

// Caller passed values outside an operation's domain. The CLI maps this to
// exit code 1.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Something outside the caller's arguments is missing or broken: files,
// credentials, remote services. The CLI maps this to exit code 2.
class EnvironmentError : public std::runtime_error {
 public:
  explicit EnvironmentError(const std::string& what)
      : std::runtime_error(what) {}
};

class UndefinedIouError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateCentroidError : public InputError {
 public:
  using InputError::InputError;
};

class TemplateParseError : public InputError {
 public:
  using InputError::InputError;
};

class JudgeUnavailableError : public EnvironmentError {
 public:
  using EnvironmentError::EnvironmentError;
};

}  // namespace panokit

#endif  // PANOKIT_ERRORS_H_
