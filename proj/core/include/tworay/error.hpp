// Copyright (c) the tworay developers. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef TWORAY_ERROR_HPP
#define TWORAY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tworay {

enum class ErrorCode {
  NonHermitian,
  DegenerateInput,
  SignViolation,
  NotUnitary,
  DimensionMismatch,
  BadGrid,
  GridMismatch,
  GridTooCoarse,
  TruncationUnsound,
  Overflow,
  OnAxis,
  NotInKernel,
  ConfigInvalid,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tworay

#endif  // TWORAY_ERROR_HPP
