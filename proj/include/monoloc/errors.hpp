// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace monoloc {

// Precondition violation by the caller (bad geometry, mismatched shapes...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A measurement that cannot be taken on the given data, e.g. RT60 of silence.
class MeasurementError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace monoloc
