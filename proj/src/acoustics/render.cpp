// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"
#include "monoloc/fft.hpp"

namespace monoloc::acoustics {

Signal render_recording(const Signal& source, const RirSignal& rir, std::optional<double> snr_db,
                        std::uint64_t noise_seed) {
  if (std::abs(source.sample_rate_hz - rir.sample_rate_hz) > 1e-9 * rir.sample_rate_hz) {
    throw InvalidInput("render_recording: source and RIR sample rates differ");
  }
  Signal out;
  out.sample_rate_hz = source.sample_rate_hz;
  out.samples = fft::convolve(source.samples, rir.samples);
  if (!snr_db || out.samples.empty()) return out;

  double power = 0.0;
  for (double v : out.samples) power += v * v;
  power /= static_cast<double>(out.samples.size());
  const double noise_std = std::sqrt(power / std::pow(10.0, *snr_db / 10.0));
  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double& v : out.samples) v += noise_std * noise(rng);
  return out;
}

}  // namespace monoloc::acoustics
