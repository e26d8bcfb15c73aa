// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "monoloc/errors.hpp"
#include "monoloc/estimators.hpp"

namespace monoloc::estimators {

DistanceMeasurement oracle_estimate(double true_distance_m, double sigma_m, std::mt19937_64& rng) {
  if (!(sigma_m >= 0.0) || !std::isfinite(sigma_m)) throw InvalidInput("oracle: sigma must be >= 0");
  if (!std::isfinite(true_distance_m)) throw InvalidInput("oracle: distance must be finite");
  DistanceMeasurement m;
  m.distance_m = true_distance_m;
  if (sigma_m > 0.0) {
    std::normal_distribution<double> noise(0.0, sigma_m);
    m.distance_m += noise(rng);
  }
  m.distance_m = std::max(0.0, m.distance_m);
  m.variance_m2 = std::max(sigma_m * sigma_m, kOracleVarianceFloor);
  return m;
}

}  // namespace monoloc::estimators
