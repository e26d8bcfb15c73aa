// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::acoustics {
namespace {

// One coordinate of an image source along a single axis.
struct AxisImage {
  double offset;  // image coordinate minus mic coordinate
  int order;      // bounces on the two walls of this axis
  double gain;    // product of per-bounce reflection factors
};

// Images of `source` along an axis of length `length` within `radius` of
// `mic`, sorted by |offset|. n indexes the lattice cell and q the mirror parity:
// coordinate (1 - 2q) * source + 2 n length, with |n - q| bounces on the lower
// wall and |n| on the upper one.
std::vector<AxisImage> axis_images(double source, double mic, double length, double radius,
                                   double lower_reflect, double upper_reflect, int max_order) {
  std::vector<AxisImage> images;
  const int n_max = static_cast<int>(std::ceil(radius / (2.0 * length))) + 1;
  for (int n = -n_max; n <= n_max; ++n) {
    for (int q = 0; q <= 1; ++q) {
      const double coord = (1 - 2 * q) * source + 2.0 * n * length;
      const double offset = coord - mic;
      if (std::abs(offset) > radius) continue;
      const int lower = std::abs(n - q);
      const int upper = std::abs(n);
      const int order = lower + upper;
      if (max_order >= 0 && order > max_order) continue;
      const double gain = std::pow(lower_reflect, lower) * std::pow(upper_reflect, upper);
      images.push_back({offset, order, gain});
    }
  }
  std::sort(images.begin(), images.end(), [](const AxisImage& a, const AxisImage& b) {
    return std::abs(a.offset) < std::abs(b.offset);
  });
  return images;
}

}  // namespace

RirSignal generate_rir(const RoomSpec& room, const Point3& source, const Point3& mic,
                       const RirOptions& options) {
  room.validate();
  if (!room.contains(source)) throw InvalidInput("generate_rir: source outside room");
  if (!room.contains(mic)) throw InvalidInput("generate_rir: microphone outside room");
  const double direct = distance(source, mic);
  if (!(direct > 0.0)) throw InvalidInput("generate_rir: source and microphone coincide");

  const double fs = room.sample_rate_hz;
  const double c = room.speed_of_sound_mps;
  const double samples_per_meter = fs / c;
  const auto direct_index = static_cast<std::size_t>(std::llround(direct * samples_per_meter));

  double length_s = options.length_s;
  if (length_s <= 0.0) {
    const double rt60 = room.target_rt60_s.value_or(room.predicted_rt60());
    length_s = std::max(0.1, 1.2 * rt60);
  }
  const std::size_t length =
      std::max<std::size_t>(static_cast<std::size_t>(std::ceil(length_s * fs)), direct_index + 1);

  // Delays round to the nearest sample, so anything closer than this radius
  // lands inside the buffer.
  const double radius = (static_cast<double>(length) - 0.5) / samples_per_meter;
  const auto reflect = [&](Surface s) { return 1.0 - room.absorption[s]; };
  const auto xs = axis_images(source.x, mic.x, room.length_m, radius, reflect(kWallX0),
                              reflect(kWallX1), options.max_order);
  const auto ys = axis_images(source.y, mic.y, room.width_m, radius, reflect(kWallY0),
                              reflect(kWallY1), options.max_order);
  const auto zs = axis_images(source.z, mic.z, room.height_m, radius, reflect(kFloor),
                              reflect(kCeiling), options.max_order);

  RirSignal rir;
  rir.sample_rate_hz = fs;
  rir.direct_path_index = direct_index;
  rir.samples.assign(length, 0.0);
  const double radius_sq = radius * radius;
  for (const auto& ix : xs) {
    const double dx2 = ix.offset * ix.offset;
    if (dx2 > radius_sq) break;
    for (const auto& iy : ys) {
      const double dxy2 = dx2 + iy.offset * iy.offset;
      if (dxy2 > radius_sq) break;
      const int order_xy = ix.order + iy.order;
      if (options.max_order >= 0 && order_xy > options.max_order) continue;
      const double gain_xy = ix.gain * iy.gain;
      for (const auto& iz : zs) {
        const double d2 = dxy2 + iz.offset * iz.offset;
        if (d2 > radius_sq) break;
        if (options.max_order >= 0 && order_xy + iz.order > options.max_order) continue;
        const double d = std::sqrt(d2);
        const auto index = static_cast<std::size_t>(std::llround(d * samples_per_meter));
        if (index >= length) continue;
        rir.samples[index] += gain_xy * iz.gain / d;
      }
    }
  }
  return rir;
}

}  // namespace monoloc::acoustics
