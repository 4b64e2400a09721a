/*
 * Copyright 2026 The s5cells Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef S5_ERROR_HPP
#define S5_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace s5 {

/// Coarse error classes. The CLI maps these onto exit codes.
enum class ErrorKind {
  Parse,         // malformed formula, schedule or model text
  Cap,           // a level cap, atom budget or horizon was exceeded
  Precondition,  // an operation was called outside its contract
  Input,         // ill-formed input data (bad indices, inconsistent JSON)
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorKind::Parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(ErrorKind::Cap, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::Precondition, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

}  // namespace s5

#endif  // S5_ERROR_HPP
