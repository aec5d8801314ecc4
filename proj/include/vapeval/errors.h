// Copyright 2026 The vapeval Authors.
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

#ifndef VAPEVAL_ERRORS_H_
#define VAPEVAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vapeval {

// Unreadable or malformed input: missing files, parse failures, bad headers.
// The command-line tool maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input whose content violates a contract (probabilities that do
// not sum to one, non-monotone timestamps, spans outside a trace). Exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace vapeval

#endif  // VAPEVAL_ERRORS_H_
