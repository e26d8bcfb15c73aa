// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/errors.hpp"
#include "monoloc/estimators.hpp"
#include "monoloc/features.hpp"

namespace monoloc::estimators {

FanetEstimator::FanetEstimator(fanet::Model m, std::optional<double> variance) : model(std::move(m)) {
  if (variance) {
    variance_m2 = *variance;
  } else {
    const double mae = model.weights().metadata.value("validation_mae_m", kDefaultValidationMae);
    variance_m2 = (mae * kMaeToStd) * (mae * kMaeToStd);
  }
  if (!(variance_m2 > 0.0)) throw InvalidInput("fanet estimator: variance must be positive");
}

DistanceMeasurement fanet_estimate(std::span<const double> segment, const FanetEstimator& estimator) {
  const auto x = features::to_subbands(features::stft_features(segment), estimator.model.config().subbands);
  DistanceMeasurement m;
  m.distance_m = estimator.model.forward(x).mean();
  m.variance_m2 = estimator.variance_m2;
  return m;
}

}  // namespace monoloc::estimators
