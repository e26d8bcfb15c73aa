// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Distance measurement back ends. Each turns an audio segment (or, for the
// oracle, the true distance) into a distance with a variance for the filter.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "monoloc/acoustics.hpp"
#include "monoloc/model.hpp"

namespace monoloc::estimators {

struct DistanceMeasurement {
  double distance_m = 0.0;
  double variance_m2 = 0.0;
  double timestamp_s = 0.0;
  double segment_len_s = 0.0;
};

// ---- oracle ---------------------------------------------------------------

// Variance reported when sigma is 0, so the measurement stays usable by a
// Kalman update.
inline constexpr double kOracleVarianceFloor = 1e-12;

// true + N(0, sigma^2), clamped at 0; variance sigma^2 (floored).
DistanceMeasurement oracle_estimate(double true_distance_m, double sigma_m, std::mt19937_64& rng);

// ---- DRR regression ---------------------------------------------------------

struct DrrOptions {
  acoustics::ChirpSpec chirp;
  double sample_rate_hz = acoustics::kDefaultSampleRate;
  double direct_window_ms = acoustics::kDefaultDirectWindowMs;
  // Wiener regularization relative to the peak excitation power spectrum.
  double regularization = 1e-3;
};

// DRR in dB of the room response recovered from a recording of the periodic
// chirp. Full periods are averaged, then deconvolved circularly by one chirp
// period; the direct window is centred on the strongest tap. Throws
// MeasurementError when the segment holds less than one period or is silent.
double estimate_segment_drr(std::span<const double> segment, const DrrOptions& options);

struct DrrCalibrationPoint {
  double drr_db = 0.0;
  double distance_m = 0.0;
};

// log(distance) = intercept + slope * drr.
struct DrrCalibration {
  double intercept = 0.0;
  double slope = 0.0;
  double residual_std_log = 0.0;  // RMS residual of the fit, natural log units
  double min_std_m = 0.05;
  bool usable = false;

  double distance_for(double drr_db) const;
  // (distance * residual_std_log)^2, floored at min_std_m^2.
  double variance_for(double distance_m) const;
};

// Least-squares fit. Throws InvalidInput for fewer than two distinct
// distances or non-positive distances. A zero (or non-finite) slope yields
// usable == false.
DrrCalibration fit_drr_calibration(std::span<const DrrCalibrationPoint> points);

struct LabeledSegment {
  std::vector<double> samples;
  double distance_m = 0.0;
};

// Segments sharing a distance are averaged (in dB) before the fit;
// residual_std_log is taken over the individual segments.
DrrCalibration drr_calibrate(std::span<const LabeledSegment> segments, const DrrOptions& options);

// Throws MeasurementError for an unusable calibration or an unmeasurable
// segment.
DistanceMeasurement drr_estimate(std::span<const double> segment, const DrrCalibration& calibration,
                                 const DrrOptions& options);

// ---- FA-Net ---------------------------------------------------------------

inline constexpr double kDefaultValidationMae = 0.179;
// MAE to standard deviation under a Gaussian error model (sqrt(pi / 2)).
inline constexpr double kMaeToStd = 1.2533;

struct FanetEstimator {
  fanet::Model model;
  double variance_m2 = 0.0;

  // Variance defaults to (validation MAE * 1.2533)^2, reading the MAE from
  // the container metadata key "validation_mae_m" when present.
  explicit FanetEstimator(fanet::Model m, std::optional<double> variance = std::nullopt);
};

// Mean of the per-frame outputs. Throws InvalidInput for segments shorter
// than one STFT frame.
DistanceMeasurement fanet_estimate(std::span<const double> segment, const FanetEstimator& estimator);

// ---- selection ------------------------------------------------------------

struct OracleKind {
  double sigma_m = 0.1;
};

struct DrrKind {
  // Fitted by the harness from the scenario's calibration set when unset.
  std::optional<DrrCalibration> calibration;
};

struct FanetKind {
  std::string weights_path;
  std::optional<double> variance_m2;
};

using EstimatorKind = std::variant<OracleKind, DrrKind, FanetKind>;

}  // namespace monoloc::estimators
