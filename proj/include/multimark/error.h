// Copyright 2026 The Multimark Authors.
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

#ifndef MULTIMARK_ERROR_H_
#define MULTIMARK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace multimark {

// Base class for every error raised by the library. The `kind()` string is
// stable and is what the CLI writes into its machine-readable error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config", what) {}
};

class InsufficientContextError : public Error {
 public:
  InsufficientContextError(std::size_t have, std::size_t need)
      : Error("insufficient_context",
              "context has " + std::to_string(have) +
                  " tokens, texture window needs " + std::to_string(need)),
        have_(have),
        need_(need) {}

  std::size_t have() const { return have_; }
  std::size_t need() const { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

class CapacityError : public Error {
 public:
  CapacityError(std::size_t required, std::size_t available)
      : Error("capacity", "payload needs " + std::to_string(required) +
                              " bits but only " + std::to_string(available) +
                              " are available"),
        required_(required),
        available_(available) {}

  std::size_t required() const { return required_; }
  std::size_t available() const { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

// Raised when a language model fails to produce a distribution. Carries the
// generation step at which the failure happened.
class ModelError : public Error {
 public:
  ModelError(std::size_t step, const std::string& what)
      : Error("model", "step " + std::to_string(step) + ": " + what),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

class CalibrationError : public Error {
 public:
  explicit CalibrationError(const std::string& what)
      : Error("calibration", what) {}
};

class UnsatisfiableError : public Error {
 public:
  explicit UnsatisfiableError(const std::string& what)
      : Error("unsatisfiable", what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("input", what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error("protocol", what) {}
};

}  // namespace multimark

#endif  // MULTIMARK_ERROR_H_
