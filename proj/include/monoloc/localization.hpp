// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Range-only localization of a static 2-D source with an extended Kalman
// filter. The state is the source position s; each measurement is a scalar
// distance z = |s - m| + w between the source and the microphone at m, with
// w ~ N(0, W).

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "monoloc/geometry.hpp"

namespace monoloc::localization {

// Angle wrapped to (-pi, pi].
double normalize_angle(double theta);

struct RobotPose {
  Point2 position;
  double theta = 0.0;  // yaw, radians

  RobotPose() = default;
  RobotPose(Point2 p, double yaw) : position(p), theta(normalize_angle(yaw)) {}
};

// Microphone position in the robot frame.
struct MicMount {
  Point2 offset;
};

// m = R(theta) p_M + p.
Point2 mic_global(const RobotPose& pose, const MicMount& mount);

struct SourceBelief {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();

  // Symmetric within 1e-9 and both eigenvalues positive.
  bool is_valid() const;
};

struct RangeMeasurement {
  double timestamp_s = 0.0;
  double distance_m = 0.0;
  double variance_m2 = 0.0;
};

enum class UpdateStatus {
  kAccepted,
  kDegenerateGeometry,  // estimate within epsilon of the microphone
  kGated,               // normalized innovation beyond the gate
};

struct UpdateOptions {
  double epsilon_m = 1e-6;
  // Reject when innovation^2 / S exceeds gate^2. Off when unset.
  std::optional<double> innovation_gate;
};

struct UpdateResult {
  SourceBelief belief;
  UpdateStatus status = UpdateStatus::kAccepted;
  double innovation = 0.0;            // z - |s - m|; 0 when degenerate
  double innovation_variance = 0.0;   // G P G^T + W
  Eigen::RowVector2d jacobian = Eigen::RowVector2d::Zero();
};

// Static source: mean and covariance unchanged.
SourceBelief predict(const SourceBelief& belief);

// Throws InvalidInput for a non-finite distance or a variance that is not
// positive and finite.
UpdateResult update(const SourceBelief& belief, const Point2& mic, const RangeMeasurement& z,
                    const UpdateOptions& options = {});

struct FilterInput {
  Point2 mic;
  RangeMeasurement z;
};

struct FilterStep {
  double timestamp_s = 0.0;
  SourceBelief belief;
  double innovation = 0.0;
  bool accepted = false;
};

// One step per measurement. Throws InvalidInput when timestamps decrease.
std::vector<FilterStep> run_filter(const SourceBelief& init, std::span<const FilterInput> stream,
                                   const UpdateOptions& options = {});

// Trace CSV: timestamp,s_x,s_y,p11,p12,p22,innovation,accepted_flag
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const FilterStep& step);
void write_trace(std::ostream& out, std::span<const FilterStep> steps);

}  // namespace monoloc::localization
