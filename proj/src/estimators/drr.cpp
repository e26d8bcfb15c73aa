// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <utility>

#include "monoloc/errors.hpp"
#include "monoloc/estimators.hpp"
#include "monoloc/fft.hpp"

namespace monoloc::estimators {

double estimate_segment_drr(std::span<const double> segment, const DrrOptions& options) {
  options.chirp.validate(options.sample_rate_hz);
  const double period_exact = options.chirp.period_s * options.sample_rate_hz;
  const auto period = static_cast<std::size_t>(std::llround(period_exact));
  if (period < 2 || std::abs(period_exact - static_cast<double>(period)) > 1e-6) {
    throw InvalidInput("drr: chirp period must be a whole number of samples");
  }
  const std::size_t periods = segment.size() / period;
  if (periods == 0) throw MeasurementError("drr: segment shorter than one chirp period");

  std::vector<double> averaged(period, 0.0);
  for (std::size_t m = 0; m < periods; ++m) {
    for (std::size_t n = 0; n < period; ++n) averaged[n] += segment[m * period + n];
  }
  for (double& v : averaged) v /= static_cast<double>(periods);

  // Per-sample noise variance from the spread between periods (the
  // excitation repeats exactly, so the residual is noise).
  double noise_var = 0.0;
  if (periods >= 2) {
    for (std::size_t m = 0; m < periods; ++m) {
      for (std::size_t n = 0; n < period; ++n) {
        const double r = segment[m * period + n] - averaged[n];
        noise_var += r * r;
      }
    }
    noise_var /= static_cast<double>((periods - 1) * period);
  }

  std::vector<double> excitation(period);
  for (std::size_t n = 0; n < period; ++n) {
    excitation[n] = acoustics::chirp_sample(options.chirp, static_cast<std::int64_t>(n), options.sample_rate_hz);
  }
  const std::size_t bins = period / 2 + 1;
  std::vector<std::complex<double>> y(bins), x(bins), h(bins);
  fft::forward_real(averaged, y);
  fft::forward_real(excitation, x);
  double peak_power = 0.0;
  for (const auto& v : x) peak_power = std::max(peak_power, std::norm(v));
  const double lambda = options.regularization * peak_power;
  // gain: sum over the full spectrum of |X|^2 / (|X|^2 + lambda)^2, the
  // factor mapping white input noise power into response energy.
  double gain = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    const double px = std::norm(x[k]);
    h[k] = y[k] * std::conj(x[k]) / (px + lambda);
    const double g = px / ((px + lambda) * (px + lambda));
    gain += (k == 0 || 2 * k == period) ? g : 2.0 * g;
  }
  const double noise_energy = noise_var / static_cast<double>(periods) * gain;
  std::vector<double> response(period);
  fft::inverse_real(h, response);

  // The response is circular (aliased by the period) and shifted by the
  // unknown chirp phase at the segment start, so the direct path is taken to
  // be the strongest tap.
  std::size_t peak = 0;
  for (std::size_t n = 1; n < period; ++n) {
    if (std::abs(response[n]) > std::abs(response[peak])) peak = n;
  }
  const auto half = static_cast<std::ptrdiff_t>(std::llround(options.direct_window_ms * 1e-3 * options.sample_rate_hz));
  double direct = 0.0;
  double total = 0.0;
  for (double v : response) total += v * v;
  if (!(total > 0.0)) throw MeasurementError("drr: silent segment");
  const auto p = static_cast<std::ptrdiff_t>(period);
  for (std::ptrdiff_t k = -half; k <= half && 2 * half < p; ++k) {
    const std::ptrdiff_t idx = ((static_cast<std::ptrdiff_t>(peak) + k) % p + p) % p;
    direct += response[idx] * response[idx];
  }
  // Remove the expected noise contribution, spread evenly over the taps.
  const std::ptrdiff_t window = 2 * half < p ? 2 * half + 1 : 0;
  const double direct_noise = noise_energy * static_cast<double>(window) / static_cast<double>(p);
  direct -= direct_noise;
  const double reverberant = total - noise_energy - direct;
  if (!(direct > 0.0)) throw MeasurementError("drr: direct path below the noise floor");
  if (!(reverberant > 0.0)) throw MeasurementError("drr: no reverberant energy above the noise floor");
  return 10.0 * std::log10(direct / reverberant);
}

double DrrCalibration::distance_for(double drr_db) const { return std::exp(intercept + slope * drr_db); }

double DrrCalibration::variance_for(double distance_m) const {
  const double sd = std::max(distance_m * residual_std_log, min_std_m);
  return sd * sd;
}

DrrCalibration fit_drr_calibration(std::span<const DrrCalibrationPoint> points) {
  std::set<double> distinct;
  for (const auto& p : points) {
    if (!(p.distance_m > 0.0) || !std::isfinite(p.distance_m) || !std::isfinite(p.drr_db)) {
      throw InvalidInput("drr calibration: distances must be positive and DRR values finite");
    }
    distinct.insert(p.distance_m);
  }
  if (distinct.size() < 2) throw InvalidInput("drr calibration: need at least two distinct distances");

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.drr_db;
    my += std::log(p.distance_m);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.drr_db - mx) * (p.drr_db - mx);
    sxy += (p.drr_db - mx) * (std::log(p.distance_m) - my);
  }
  DrrCalibration cal;
  cal.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  cal.intercept = my - cal.slope * mx;
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.distance_m) - (cal.intercept + cal.slope * p.drr_db);
    sse += r * r;
  }
  cal.residual_std_log = std::sqrt(sse / n);
  cal.usable = std::isfinite(cal.slope) && cal.slope != 0.0;
  return cal;
}

DrrCalibration drr_calibrate(std::span<const LabeledSegment> segments, const DrrOptions& options) {
  std::vector<DrrCalibrationPoint> raw;
  raw.reserve(segments.size());
  for (const auto& s : segments) raw.push_back({estimate_segment_drr(s.samples, options), s.distance_m});

  // Fit on per-distance mean DRR; noise in the regressor would otherwise
  // flatten the slope.
  std::map<double, std::pair<double, int>> groups;
  for (const auto& p : raw) {
    auto& g = groups[p.distance_m];
    g.first += p.drr_db;
    g.second += 1;
  }
  std::vector<DrrCalibrationPoint> means;
  for (const auto& [d, g] : groups) means.push_back({g.first / g.second, d});
  DrrCalibration cal = fit_drr_calibration(means);

  double sse = 0.0;
  for (const auto& p : raw) {
    const double r = std::log(p.distance_m) - (cal.intercept + cal.slope * p.drr_db);
    sse += r * r;
  }
  cal.residual_std_log = std::sqrt(sse / static_cast<double>(raw.size()));
  return cal;
}

DistanceMeasurement drr_estimate(std::span<const double> segment, const DrrCalibration& calibration,
                                 const DrrOptions& options) {
  if (!calibration.usable) throw MeasurementError("drr: calibration is unusable (zero slope)");
  DistanceMeasurement m;
  m.distance_m = calibration.distance_for(estimate_segment_drr(segment, options));
  if (!std::isfinite(m.distance_m)) throw MeasurementError("drr: estimate is not finite");
  m.variance_m2 = calibration.variance_for(m.distance_m);
  return m;
}

}  // namespace monoloc::estimators
