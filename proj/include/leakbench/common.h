/*
 * Copyright 2026 The Leakbench Authors.
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

#ifndef LEAKBENCH_COMMON_H_
#define LEAKBENCH_COMMON_H_

#include <stdexcept>
#include <string>

namespace leakbench {

// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or ambiguous experiment configuration. The CLI maps this to exit
// code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace leakbench

#endif  // LEAKBENCH_COMMON_H_
