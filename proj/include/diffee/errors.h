// Copyright 2026 The DIFFEE Authors.
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

#ifndef DIFFEE_ERRORS_H_
#define DIFFEE_ERRORS_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace diffee {

// Which of the two sample groups a matrix belongs to: 'c' (control) or
// 'd' (case).
enum class Condition { kControl, kCase };

inline char ConditionTag(Condition condition) {
  return condition == Condition::kControl ? 'c' : 'd';
}

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: negative thresholds, non-finite entries, violated
// preconditions. The CLI maps these to exit code 2.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A symmetric matrix failed the invertibility guard. Carries the offending
// eigenvalue and, once known, the condition whose matrix failed.
class NotInvertibleError : public Error {
 public:
  NotInvertibleError(double eigenvalue, double tolerance,
                     std::optional<Condition> condition = std::nullopt);

  double eigenvalue() const { return eigenvalue_; }
  double tolerance() const { return tolerance_; }
  std::optional<Condition> condition() const { return condition_; }

  NotInvertibleError WithCondition(Condition condition) const {
    return NotInvertibleError(eigenvalue_, tolerance_, condition);
  }

 private:
  double eigenvalue_;
  double tolerance_;
  std::optional<Condition> condition_;
};

// No value of a v grid made both thresholded covariances invertible.
class SelectionFailedError : public Error {
 public:
  explicit SelectionFailedError(double best_min_eigenvalue);

  // Largest smallest-eigenvalue reached over the grid (the worse of the two
  // conditions at each grid point).
  double best_min_eigenvalue() const { return best_min_eigenvalue_; }

 private:
  double best_min_eigenvalue_;
};

}  // namespace diffee

#endif  // DIFFEE_ERRORS_H_
