// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::acoustics {

double compute_rt60(const RirSignal& rir) {
  const double fs = rir.sample_rate_hz;
  const std::size_t n = rir.samples.size();
  if (static_cast<double>(n) < 0.1 * fs - 1e-9) {
    throw InvalidInput("compute_rt60: response shorter than 0.1 s");
  }

  // Schroeder energy decay curve, normalized to 0 dB at t = 0.
  std::vector<double> edc(n);
  double tail = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    tail += rir.samples[i] * rir.samples[i];
    edc[i] = tail;
  }
  const double total = edc.front();
  if (!(total > 0.0)) throw MeasurementError("compute_rt60: response has no energy");
  for (double& e : edc) e = 10.0 * std::log10(e / total);

  // Least-squares line through the -5..-25 dB portion.
  double st = 0.0, se = 0.0, stt = 0.0, ste = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (edc[i] > -5.0 || edc[i] < -25.0) continue;
    const double t = static_cast<double>(i) / fs;
    st += t;
    se += edc[i];
    stt += t * t;
    ste += t * edc[i];
    ++count;
  }
  if (count >= 2) {
    const double m = static_cast<double>(count);
    const double denom = m * stt - st * st;
    if (denom > 0.0) {
      const double slope = (m * ste - st * se) / denom;
      if (slope < 0.0) return -60.0 / slope;
    }
  }

  // Too few samples in range (near-instant decay): use the crossing times.
  const auto crossing = [&](double level) -> std::size_t {
    const auto it = std::find_if(edc.begin(), edc.end(), [&](double e) { return e <= level; });
    if (it == edc.end()) throw MeasurementError("compute_rt60: decay does not reach -25 dB");
    return static_cast<std::size_t>(it - edc.begin());
  };
  const std::size_t i5 = crossing(-5.0);
  const std::size_t i25 = crossing(-25.0);
  return 3.0 * static_cast<double>(i25 - i5) / fs;
}

double drr_from_samples(std::span<const double> samples, std::size_t direct_index,
                        double sample_rate_hz, double direct_window_ms) {
  if (!(direct_window_ms > 0.0)) throw InvalidInput("compute_drr: window must be positive");
  if (direct_index >= samples.size()) throw InvalidInput("compute_drr: direct index out of range");
  const auto half = static_cast<std::size_t>(std::llround(direct_window_ms * 1e-3 * sample_rate_hz));
  const std::size_t lo = direct_index >= half ? direct_index - half : 0;
  const std::size_t hi = std::min(samples.size() - 1, direct_index + half);
  double direct = 0.0;
  double reverberant = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = samples[i] * samples[i];
    if (i >= lo && i <= hi) {
      direct += e;
    } else {
      reverberant += e;
    }
  }
  if (reverberant == 0.0) return std::numeric_limits<double>::infinity();
  if (direct == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(direct / reverberant);
}

double compute_drr(const RirSignal& rir, double direct_window_ms) {
  return drr_from_samples(rir.samples, rir.direct_path_index, rir.sample_rate_hz, direct_window_ms);
}

}  // namespace monoloc::acoustics
