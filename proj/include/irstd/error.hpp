// Copyright 2026 The irstd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace irstd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file content (header, token, magic).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Stored or requested dimensions disagree with the data.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value outside its allowed domain (non-finite, outside [0,1], ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// An invalid configuration parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (unreadable / unwritable path).
class IoError : public Error {
 public:
  using Error::Error;
};

/// The file backend could not find a prediction it was asked for.
class MissingPredictionError : public Error {
 public:
  using Error::Error;
};

/// Scene generation could not place the requested targets.
class PlacementError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure inside the inference pipeline with the name of the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace irstd
