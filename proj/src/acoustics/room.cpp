// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::acoustics {
namespace {

// 24 ln(10) / c, the constant in the Sabine and Eyring formulas.
double reverberation_constant(double speed_of_sound) {
  return 24.0 * std::numbers::ln10 / speed_of_sound;
}

// Reference pair for fitting absorption to a target RT60. Off-centre so that
// no axial mode is favoured.
Point3 reference_source(const RoomSpec& room) {
  return {0.31 * room.length_m, 0.42 * room.width_m, 0.47 * room.height_m};
}
Point3 reference_mic(const RoomSpec& room) {
  return {0.68 * room.length_m, 0.61 * room.width_m, 0.40 * room.height_m};
}

}  // namespace

double sabine_absorption(double volume_m3, double surface_m2, double rt60_s) {
  if (volume_m3 <= 0.0 || surface_m2 <= 0.0 || rt60_s <= 0.0) {
    throw InvalidInput("sabine_absorption: volume, surface and rt60 must be positive");
  }
  return reverberation_constant(kDefaultSpeedOfSound) * volume_m3 / (surface_m2 * rt60_s);
}

RoomSpec RoomSpec::with_absorption(double length_m, double width_m, double height_m,
                                   double absorption) {
  RoomSpec room;
  room.length_m = length_m;
  room.width_m = width_m;
  room.height_m = height_m;
  room.absorption.fill(absorption);
  room.validate();
  return room;
}

RoomSpec RoomSpec::with_target_rt60(double length_m, double width_m, double height_m,
                                    double rt60_s) {
  if (!(rt60_s > 0.0) || !std::isfinite(rt60_s)) {
    throw InvalidInput("target RT60 must be positive and finite");
  }
  RoomSpec room;
  room.length_m = length_m;
  room.width_m = width_m;
  room.height_m = height_m;
  room.target_rt60_s = rt60_s;

  // Sabine gives an energy coefficient; the amplitude loss per bounce is
  // 1 - sqrt(1 - alpha). The image model of a shoebox does not follow the
  // diffuse-field formulas closely, so refine on the model itself: RT60 scales
  // roughly with 1 / -ln(1 - absorption).
  const double alpha = std::clamp(
      sabine_absorption(room.volume(), room.surface_area(), rt60_s), 1e-6, 1.0 - 1e-9);
  double log_loss = -0.5 * std::log(1.0 - alpha);
  for (int iter = 0; iter < 12; ++iter) {
    room.absorption.fill(1.0 - std::exp(-log_loss));
    room.validate();
    const RirSignal rir = generate_rir(room, reference_source(room), reference_mic(room));
    const double measured = compute_rt60(rir);
    const double ratio = measured / rt60_s;
    if (std::abs(ratio - 1.0) < 0.01) break;
    log_loss *= std::clamp(ratio, 0.25, 4.0);
  }
  return room;
}

void RoomSpec::validate() const {
  if (!(length_m > 0.0) || !(width_m > 0.0) || !(height_m > 0.0) || !std::isfinite(length_m) ||
      !std::isfinite(width_m) || !std::isfinite(height_m)) {
    throw InvalidInput("room dimensions must be positive and finite");
  }
  for (double a : absorption) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw InvalidInput("room absorption must lie in (0, 1], got " + std::to_string(a));
    }
  }
  if (!(speed_of_sound_mps > 0.0)) throw InvalidInput("speed of sound must be positive");
  if (!(sample_rate_hz > 0.0)) throw InvalidInput("sample rate must be positive");
  if (target_rt60_s && !(*target_rt60_s > 0.0)) throw InvalidInput("target RT60 must be positive");
}

bool RoomSpec::contains(const Point3& p) const {
  return p.x > 0.0 && p.x < length_m && p.y > 0.0 && p.y < width_m && p.z > 0.0 && p.z < height_m;
}

double RoomSpec::surface_area() const {
  return 2.0 * (length_m * width_m + length_m * height_m + width_m * height_m);
}

double RoomSpec::predicted_rt60() const {
  const std::array<double, 6> areas = {width_m * height_m,  width_m * height_m,
                                       length_m * height_m, length_m * height_m,
                                       length_m * width_m,  length_m * width_m};
  double absorbed = 0.0;
  for (int s = 0; s < 6; ++s) {
    const double energy_loss = 1.0 - (1.0 - absorption[s]) * (1.0 - absorption[s]);
    absorbed += areas[s] * energy_loss;
  }
  const double mean_loss = absorbed / surface_area();
  if (mean_loss >= 1.0) return 0.0;
  return reverberation_constant(speed_of_sound_mps) * volume() /
         (-surface_area() * std::log(1.0 - mean_loss));
}

}  // namespace monoloc::acoustics
