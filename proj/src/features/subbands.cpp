// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <string>

#include "monoloc/errors.hpp"
#include "monoloc/features.hpp"

namespace monoloc::features {

SubbandTensor to_subbands(const FeatureTensor& x, int n) {
  if (n <= 0 || x.freq_bins % n != 0) {
    throw InvalidInput("to_subbands: " + std::to_string(n) + " does not divide " +
                       std::to_string(x.freq_bins) + " frequency bins");
  }
  SubbandTensor out;
  out.subbands = n;
  out.rows = x.freq_bins / n;
  out.frames = x.frames;
  out.data.resize(x.data.size());
  for (int b = 0; b < n; ++b) {
    for (int c = 0; c < kFeatureChannels; ++c) {
      for (int r = 0; r < out.rows; ++r) {
        for (int t = 0; t < x.frames; ++t) {
          out.at(b * kFeatureChannels + c, r, t) = x.at(c, b * out.rows + r, t);
        }
      }
    }
  }
  return out;
}

FeatureTensor from_subbands(const SubbandTensor& x) {
  FeatureTensor out;
  out.freq_bins = x.subbands * x.rows;
  out.frames = x.frames;
  out.data.resize(x.data.size());
  for (int b = 0; b < x.subbands; ++b) {
    for (int c = 0; c < kFeatureChannels; ++c) {
      for (int r = 0; r < x.rows; ++r) {
        for (int t = 0; t < x.frames; ++t) {
          out.at(c, b * x.rows + r, t) = x.at(b * kFeatureChannels + c, r, t);
        }
      }
    }
  }
  return out;
}

}  // namespace monoloc::features
