// Copyright (c) volcount contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace volcount {

/// Bad command line; exit status 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; exit status 2. Carries the 1-based line when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Any failure inside a volume or counting backend; exit status 3.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public BackendError {
 public:
  using BackendError::BackendError;
};

class UnboundedError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// Wall-clock budget exhausted; exit status 4.
class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time limit exceeded") {}
};

/// Cooperative time limit. A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;
  static Deadline after_seconds(double seconds) {
    Deadline d;
    if (seconds > 0) {
      d.armed_ = true;
      d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(seconds));
    }
    return d;
  }

  bool expired() const { return armed_ && Clock::now() >= end_; }
  void check() const {
    if (expired()) throw TimeoutError();
  }

 private:
  bool armed_ = false;
  Clock::time_point end_{};
};

}  // namespace volcount
