// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "monoloc/errors.hpp"
#include "monoloc/localization.hpp"

namespace monoloc::localization {

bool SourceBelief::is_valid() const {
  if (!mean.allFinite() || !covariance.allFinite()) return false;
  if (std::abs(covariance(0, 1) - covariance(1, 0)) > 1e-9) return false;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(covariance);
  return solver.eigenvalues().minCoeff() > 0.0;
}

SourceBelief predict(const SourceBelief& belief) { return belief; }

UpdateResult update(const SourceBelief& belief, const Point2& mic, const RangeMeasurement& z,
                    const UpdateOptions& options) {
  if (!std::isfinite(z.distance_m)) throw InvalidInput("ekf update: distance must be finite");
  if (!(z.variance_m2 > 0.0) || !std::isfinite(z.variance_m2)) {
    throw InvalidInput("ekf update: measurement variance must be positive and finite");
  }
  UpdateResult result;
  result.belief = belief;
  const Eigen::Vector2d delta = belief.mean - Eigen::Vector2d(mic.x, mic.y);
  const double predicted = delta.norm();
  if (predicted <= options.epsilon_m) {
    result.status = UpdateStatus::kDegenerateGeometry;
    return result;
  }
  const Eigen::RowVector2d g = delta.transpose() / predicted;
  const Eigen::Matrix2d& p = belief.covariance;
  const double s = (g * p * g.transpose())(0, 0) + z.variance_m2;
  result.jacobian = g;
  result.innovation = z.distance_m - predicted;
  result.innovation_variance = s;
  if (options.innovation_gate &&
      result.innovation * result.innovation > *options.innovation_gate * *options.innovation_gate * s) {
    result.status = UpdateStatus::kGated;
    return result;
  }
  const Eigen::Vector2d k = p * g.transpose() / s;
  result.belief.mean = belief.mean + k * result.innovation;
  const Eigen::Matrix2d updated = (Eigen::Matrix2d::Identity() - k * g) * p;
  result.belief.covariance = 0.5 * (updated + updated.transpose());
  return result;
}

std::vector<FilterStep> run_filter(const SourceBelief& init, std::span<const FilterInput> stream,
                                   const UpdateOptions& options) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].z.timestamp_s < stream[i - 1].z.timestamp_s) {
      throw InvalidInput("run_filter: measurement " + std::to_string(i) + " is earlier than its predecessor");
    }
  }
  std::vector<FilterStep> steps;
  steps.reserve(stream.size());
  SourceBelief belief = init;
  for (const auto& in : stream) {
    const UpdateResult r = update(predict(belief), in.mic, in.z, options);
    belief = r.belief;
    steps.push_back({in.z.timestamp_s, belief, r.innovation, r.status == UpdateStatus::kAccepted});
  }
  return steps;
}

}  // namespace monoloc::localization
