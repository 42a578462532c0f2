// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <stdexcept>
#include <string>

namespace unitone {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recognized container, but an encoding this library does not read.
class UnsupportedFormat : public IoError {
 public:
  using IoError::IoError;
};

class RateMismatch : public IoError {
 public:
  using IoError::IoError;
};

// An internal consistency check failed (e.g. a real pipeline produced a
// complex residue).
class NumericIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace unitone
