// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/parity.hpp"

#include <algorithm>
#include <cmath>

#include "monoloc/errors.hpp"

namespace monoloc::fanet {
namespace {

constexpr std::string_view kInputSuffix = ".input";

bool has_array(const tensor_io::TensorFile& file, const std::string& name) {
  return std::any_of(file.arrays.begin(), file.arrays.end(), [&](const auto& a) { return a.name == name; });
}

}  // namespace

double ParityReport::max_output_error() const {
  double m = 0.0;
  for (const auto& c : cases) m = std::max(m, c.max_output_error);
  return m;
}

double ParityReport::max_feature_error() const {
  double m = -1.0;
  for (const auto& c : cases) m = std::max(m, c.max_feature_error);
  return m;
}

bool ParityReport::passed(double output_tol, double feature_tol) const {
  return !cases.empty() && max_output_error() <= output_tol && max_feature_error() <= feature_tol;
}

ParityReport check_parity(const Model& model, const tensor_io::TensorFile& fixture) {
  const FaNetConfig& cfg = model.config();
  ParityReport report;
  for (const auto& array : fixture.arrays) {
    const std::string& name = array.name;
    if (name.size() <= kInputSuffix.size() ||
        name.compare(name.size() - kInputSuffix.size(), kInputSuffix.size(), kInputSuffix) != 0) {
      continue;
    }
    const std::string stem = name.substr(0, name.size() - kInputSuffix.size());
    if (array.shape.size() != 3) throw InvalidInput("parity: '" + name + "' must be rank 3");

    features::SubbandTensor x;
    x.subbands = static_cast<int>(array.shape[0]) / features::kFeatureChannels;
    x.rows = static_cast<int>(array.shape[1]);
    x.frames = static_cast<int>(array.shape[2]);
    x.data = array.data;

    const auto& expected = fixture.get(stem + ".expected");
    if (expected.data.size() != static_cast<std::size_t>(x.frames)) {
      throw InvalidInput("parity: '" + stem + ".expected' length differs from the input frame count");
    }

    ParityCase result;
    result.name = stem;
    result.frames = x.frames;
    const FrameOutputs out = model.forward(x);
    for (int t = 0; t < x.frames; ++t) {
      result.max_output_error =
          std::max(result.max_output_error, std::abs(static_cast<double>(out.values[t]) - expected.data[t]));
    }

    if (has_array(fixture, stem + ".audio")) {
      const auto& audio = fixture.get(stem + ".audio");
      const std::vector<double> samples(audio.data.begin(), audio.data.end());
      const auto recomputed = features::to_subbands(features::stft_features(samples), cfg.subbands);
      if (recomputed.data.size() != x.data.size()) {
        throw InvalidInput("parity: features of '" + stem + ".audio' have a different shape than the input");
      }
      result.max_feature_error = 0.0;
      for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double ref = x.data[i];
        const double err = std::abs(static_cast<double>(recomputed.data[i]) - ref) / std::max(1.0, std::abs(ref));
        result.max_feature_error = std::max(result.max_feature_error, err);
      }
    }
    report.cases.push_back(result);
  }
  if (report.cases.empty()) throw InvalidInput("parity: fixture contains no '<case>.input' arrays");
  return report;
}

}  // namespace monoloc::fanet
