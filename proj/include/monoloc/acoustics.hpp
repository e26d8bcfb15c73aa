// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Shoebox room acoustics: image-source impulse responses, chirp excitation,
// recording synthesis, and the RT60 / DRR descriptors used to sanity-check
// the simulated rooms.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "monoloc/geometry.hpp"

namespace monoloc::acoustics {

inline constexpr double kDefaultSpeedOfSound = 343.0;
inline constexpr double kDefaultSampleRate = 16000.0;
inline constexpr double kDefaultDirectWindowMs = 2.5;

// Wall order in per-surface arrays.
enum Surface : int { kWallX0 = 0, kWallX1, kWallY0, kWallY1, kFloor, kCeiling };

// Axis-aligned room spanning [0, length] x [0, width] x [0, height].
//
// absorption[s] is the fraction of pressure amplitude lost at each bounce off
// surface s, so a path with n bounces on that surface is scaled by
// (1 - absorption[s])^n.
struct RoomSpec {
  double length_m = 0.0;
  double width_m = 0.0;
  double height_m = 0.0;
  std::array<double, 6> absorption{};
  std::optional<double> target_rt60_s;
  double speed_of_sound_mps = kDefaultSpeedOfSound;
  double sample_rate_hz = kDefaultSampleRate;

  static RoomSpec with_absorption(double length_m, double width_m, double height_m,
                                  double absorption);

  // Absorption is fitted so that generated responses decay with the target
  // RT60 (Schroeder measurement on a reference source/mic pair).
  static RoomSpec with_target_rt60(double length_m, double width_m, double height_m,
                                   double rt60_s);

  void validate() const;
  bool contains(const Point3& p) const;
  double volume() const { return length_m * width_m * height_m; }
  double surface_area() const;

  // Eyring estimate from the current absorption; used to size responses.
  double predicted_rt60() const;
};

// Sabine estimate of the energy absorption coefficient for a target RT60.
double sabine_absorption(double volume_m3, double surface_m2, double rt60_s);

struct RirSignal {
  std::vector<double> samples;
  double sample_rate_hz = kDefaultSampleRate;
  std::size_t direct_path_index = 0;
};

struct Signal {
  std::vector<double> samples;
  double sample_rate_hz = kDefaultSampleRate;
};

// Negative max_order includes every image arriving within the response length.
inline constexpr int kAllOrders = -1;

struct RirOptions {
  int max_order = kAllOrders;
  // 0 selects 1.2 x the room's RT60 (target if set, otherwise predicted).
  double length_s = 0.0;
};

RirSignal generate_rir(const RoomSpec& room, const Point3& source, const Point3& mic,
                       const RirOptions& options = {});

// Linear sweep f_start -> f_end repeating every period_s.
struct ChirpSpec {
  double f_start_hz = 0.0;
  double f_end_hz = 8000.0;
  double period_s = 0.1;
  double amplitude = 1.0;

  void validate(double sample_rate_hz) const;
};

// Sample n of the free-running sweep that started at n = 0.
double chirp_sample(const ChirpSpec& spec, std::int64_t n, double sample_rate_hz);

Signal synthesize_chirp(const ChirpSpec& spec, double duration_s,
                        double sample_rate_hz = kDefaultSampleRate);

// Full linear convolution of source with rir (length S + R - 1). When snr_db is
// set, white Gaussian noise is added at that SNR relative to the output power.
Signal render_recording(const Signal& source, const RirSignal& rir,
                        std::optional<double> snr_db = std::nullopt, std::uint64_t noise_seed = 0);

// Schroeder backward integration, line fit between -5 and -25 dB, extrapolated
// to 60 dB. Throws MeasurementError for an all-zero response.
double compute_rt60(const RirSignal& rir);

// 10 log10(direct / reverberant) with the direct part taken as
// +-direct_window_ms around direct_path_index. Returns +infinity when the
// response has no energy outside the window.
double compute_drr(const RirSignal& rir, double direct_window_ms = kDefaultDirectWindowMs);

// Same measurement on raw samples with an explicit direct-path index.
double drr_from_samples(std::span<const double> samples, std::size_t direct_index,
                        double sample_rate_hz, double direct_window_ms = kDefaultDirectWindowMs);

// 32-bit float little-endian mono WAV (format tag 3).
void write_wav_f32(const std::filesystem::path& path, std::span<const double> samples,
                   double sample_rate_hz);
Signal read_wav_f32(const std::filesystem::path& path);

}  // namespace monoloc::acoustics
