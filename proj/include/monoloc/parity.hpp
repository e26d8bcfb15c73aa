// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Cross-implementation parity fixtures. A fixture is a tensor_io file holding,
// for each case <name>:
//
//   <name>.input     [4N, F/N, T]  subband features fed to the network
//   <name>.expected  [T]           per-frame outputs of the exporting side
//   <name>.audio     [L]           optional; the segment the features came from
//
// When audio is present, the features recomputed here are compared with
// <name>.input as well; that error is relative for magnitudes above 1, since
// float32 STFT values of a full-scale signal reach the hundreds.

#pragma once

#include <string>
#include <vector>

#include "monoloc/model.hpp"
#include "monoloc/tensor_io.hpp"

namespace monoloc::fanet {

inline constexpr double kParityTolerance = 1e-4;
inline constexpr double kFeatureParityTolerance = 1e-5;

struct ParityCase {
  std::string name;
  int frames = 0;
  double max_output_error = 0.0;
  // Negative when the case carries no audio.
  double max_feature_error = -1.0;
};

struct ParityReport {
  std::vector<ParityCase> cases;

  double max_output_error() const;
  double max_feature_error() const;
  bool passed(double output_tol = kParityTolerance, double feature_tol = kFeatureParityTolerance) const;
};

// Throws InvalidInput for a fixture without cases or with inconsistent shapes.
ParityReport check_parity(const Model& model, const tensor_io::TensorFile& fixture);

}  // namespace monoloc::fanet
