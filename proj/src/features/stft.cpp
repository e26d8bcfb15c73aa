// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "monoloc/errors.hpp"
#include "monoloc/features.hpp"
#include "monoloc/fft.hpp"

namespace monoloc::features {

void StftSpec::validate() const {
  if (frame_len <= 0 || hop <= 0 || hop > frame_len) {
    throw InvalidInput("stft: need 0 < hop <= frame_len");
  }
  if (fft_size < frame_len) throw InvalidInput("stft: fft_size must be >= frame_len");
  if (freq_bins <= 0 || freq_bins > fft_size / 2 + 1) {
    throw InvalidInput("stft: freq_bins exceeds the available FFT bins");
  }
}

int frame_count(std::size_t length, const StftSpec& spec) {
  const auto frame = static_cast<std::size_t>(spec.frame_len);
  if (length < frame) return 0;
  return 1 + static_cast<int>((length - frame) / static_cast<std::size_t>(spec.hop));
}

std::vector<double> analysis_window(const StftSpec& spec) {
  std::vector<double> w(static_cast<std::size_t>(spec.frame_len), 1.0);
  if (spec.window == Window::kHann) {
    const double n = spec.frame_len;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
    }
  }
  return w;
}

FeatureTensor stft_features(std::span<const double> segment, const StftSpec& spec) {
  spec.validate();
  const int frames = frame_count(segment.size(), spec);
  if (frames == 0) throw InvalidInput("stft: segment shorter than one frame");

  FeatureTensor out;
  out.freq_bins = spec.freq_bins;
  out.frames = frames;
  out.segment_length = segment.size();
  out.data.assign(static_cast<std::size_t>(kFeatureChannels) * spec.freq_bins * frames, 0.0f);

  const auto window = analysis_window(spec);
  std::vector<double> frame(static_cast<std::size_t>(spec.fft_size), 0.0);
  std::vector<std::complex<double>> bins(static_cast<std::size_t>(spec.fft_size / 2 + 1));
  for (int t = 0; t < frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * static_cast<std::size_t>(spec.hop);
    for (int i = 0; i < spec.frame_len; ++i) frame[i] = segment[start + i] * window[i];
    fft::forward_real(frame, bins);
    for (int f = 0; f < spec.freq_bins; ++f) {
      const double re = bins[f].real();
      const double im = bins[f].imag();
      out.at(kReal, f, t) = static_cast<float>(re);
      out.at(kImag, f, t) = static_cast<float>(im);
      if (re == 0.0 && im == 0.0) {
        // Phase of an empty bin is defined as 0.
        out.at(kSin, f, t) = 0.0f;
        out.at(kCos, f, t) = 1.0f;
      } else {
        const double mag = std::hypot(re, im);
        out.at(kSin, f, t) = static_cast<float>(im / mag);
        out.at(kCos, f, t) = static_cast<float>(re / mag);
      }
    }
  }
  return out;
}

}  // namespace monoloc::features
