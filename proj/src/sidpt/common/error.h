// Copyright (c) 2026 The sidpt Authors
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

#ifndef SIDPT_COMMON_ERROR_H_
#define SIDPT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace sidpt {

// Base class for every domain error raised by the library. The CLI maps
// these to exit code 1; anything else escaping main is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public Error {
  using Error::Error;
};
class IoError : public Error {
  using Error::Error;
};
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};
class LabelError : public Error {
  using Error::Error;
};
class ShapeError : public Error {
  using Error::Error;
};
class LengthError : public Error {
  using Error::Error;
};
class DegenerateInputError : public Error {
  using Error::Error;
};
class EncodingError : public Error {
  using Error::Error;
};
class BatchCompositionError : public Error {
  using Error::Error;
};
class SimulationError : public Error {
  using Error::Error;
};
class CheckpointError : public Error {
  using Error::Error;
};
class AlignmentError : public Error {
  using Error::Error;
};
class MetricError : public Error {
  using Error::Error;
};
class ConfigError : public Error {
  using Error::Error;
};
class TrainingError : public Error {
  using Error::Error;
};

}  // namespace sidpt

#endif  // SIDPT_COMMON_ERROR_H_
