// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::acoustics {

void ChirpSpec::validate(double sample_rate_hz) const {
  if (!(f_start_hz >= 0.0 && f_start_hz < f_end_hz && f_end_hz <= sample_rate_hz / 2.0)) {
    throw InvalidInput("chirp: need 0 <= f_start < f_end <= fs/2");
  }
  if (!(period_s > 0.0) || !std::isfinite(period_s)) throw InvalidInput("chirp: period must be positive");
}

double chirp_sample(const ChirpSpec& spec, std::int64_t n, double sample_rate_hz) {
  // Time within the current sweep. When the period is a whole number of
  // samples the reduction is done in integers so that every period is
  // bit-identical.
  const double period_samples = spec.period_s * sample_rate_hz;
  const double rounded = std::round(period_samples);
  double tau;
  if (std::abs(period_samples - rounded) < 1e-9 && rounded >= 1.0) {
    const auto p = static_cast<std::int64_t>(rounded);
    std::int64_t k = n % p;
    if (k < 0) k += p;
    tau = static_cast<double>(k) / sample_rate_hz;
  } else {
    tau = std::fmod(static_cast<double>(n) / sample_rate_hz, spec.period_s);
    if (tau < 0.0) tau += spec.period_s;
  }
  const double sweep_rate = (spec.f_end_hz - spec.f_start_hz) / spec.period_s;
  const double phase = 2.0 * std::numbers::pi * (spec.f_start_hz * tau + 0.5 * sweep_rate * tau * tau);
  return spec.amplitude * std::sin(phase);
}

Signal synthesize_chirp(const ChirpSpec& spec, double duration_s, double sample_rate_hz) {
  spec.validate(sample_rate_hz);
  if (!(duration_s > 0.0)) throw InvalidInput("chirp: duration must be positive");
  Signal out;
  out.sample_rate_hz = sample_rate_hz;
  const auto length = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
  out.samples.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.samples[i] = chirp_sample(spec, static_cast<std::int64_t>(i), sample_rate_hz);
  }
  return out;
}

}  // namespace monoloc::acoustics
