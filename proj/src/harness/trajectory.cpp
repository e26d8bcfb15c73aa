// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>

#include "monoloc/errors.hpp"
#include "monoloc/harness.hpp"

namespace monoloc::harness {

using localization::RobotPose;

void TrajectorySpec::validate() const {
  if (!(sample_period_s > 0.0) || !std::isfinite(sample_period_s)) {
    throw InvalidInput("trajectory: sample_period_s must be positive");
  }
  if (const auto* c = std::get_if<CircleSpec>(&path)) {
    if (!(c->radius_m > 0.0) || !std::isfinite(c->radius_m)) throw InvalidInput("trajectory: radius must be positive");
    if (!std::isfinite(c->angular_speed_rad_s) || !std::isfinite(c->start_angle_rad)) {
      throw InvalidInput("trajectory: circle speed and start angle must be finite");
    }
  } else {
    const auto& w = std::get<WaypointSpec>(path);
    if (w.points.empty()) throw InvalidInput("trajectory: waypoint list is empty");
    if (!(w.speed_mps > 0.0) || !std::isfinite(w.speed_mps)) throw InvalidInput("trajectory: speed must be positive");
  }
}

namespace {

RobotPose circle_pose(const CircleSpec& c, double t) {
  const double phi = c.start_angle_rad + c.angular_speed_rad_s * t;
  const Point2 p{c.center.x + c.radius_m * std::cos(phi), c.center.y + c.radius_m * std::sin(phi)};
  const double turn = c.angular_speed_rad_s >= 0.0 ? std::numbers::pi / 2 : -std::numbers::pi / 2;
  return {p, phi + turn};
}

RobotPose waypoint_pose(const WaypointSpec& w, double t) {
  double remaining = std::max(0.0, t) * w.speed_mps;
  double heading = 0.0;
  bool have_heading = false;
  for (std::size_t i = 0; i + 1 < w.points.size(); ++i) {
    const Point2& a = w.points[i];
    const Point2& b = w.points[i + 1];
    const double len = distance(a, b);
    if (len == 0.0) continue;
    heading = std::atan2(b.y - a.y, b.x - a.x);
    have_heading = true;
    if (remaining <= len) {
      const double u = remaining / len;
      return {{a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)}, heading};
    }
    remaining -= len;
  }
  return {w.points.back(), have_heading ? heading : 0.0};
}

}  // namespace

RobotPose pose_at(const TrajectorySpec& spec, double t) {
  if (const auto* c = std::get_if<CircleSpec>(&spec.path)) return circle_pose(*c, t);
  return waypoint_pose(std::get<WaypointSpec>(spec.path), t);
}

std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec, double duration_s) {
  spec.validate();
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) throw InvalidInput("trajectory: duration must be >= 0");
  const auto last = static_cast<std::size_t>(std::floor(duration_s / spec.sample_period_s + 1e-9));
  std::vector<TimedPose> poses;
  poses.reserve(last + 1);
  for (std::size_t i = 0; i <= last; ++i) {
    const double t = static_cast<double>(i) * spec.sample_period_s;
    poses.push_back({t, pose_at(spec, t)});
  }
  return poses;
}

RobotPose interpolate_pose(const std::vector<TimedPose>& poses, double t) {
  if (poses.empty()) throw InvalidInput("interpolate_pose: no poses");
  if (t <= poses.front().time_s) return poses.front().pose;
  if (t >= poses.back().time_s) return poses.back().pose;
  const auto it = std::upper_bound(poses.begin(), poses.end(), t,
                                   [](double value, const TimedPose& p) { return value < p.time_s; });
  const TimedPose& b = *it;
  const TimedPose& a = *(it - 1);
  const double u = (t - a.time_s) / (b.time_s - a.time_s);
  const double dtheta = localization::normalize_angle(b.pose.theta - a.pose.theta);
  return {{a.pose.position.x + u * (b.pose.position.x - a.pose.position.x),
           a.pose.position.y + u * (b.pose.position.y - a.pose.position.y)},
          a.pose.theta + u * dtheta};
}

}  // namespace monoloc::harness
