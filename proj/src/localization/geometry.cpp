// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "monoloc/localization.hpp"

namespace monoloc::localization {

double normalize_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(theta, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

Point2 mic_global(const RobotPose& pose, const MicMount& mount) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  return {c * mount.offset.x - s * mount.offset.y + pose.position.x,
          s * mount.offset.x + c * mount.offset.y + pose.position.y};
}

}  // namespace monoloc::localization
