// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Network input features: a 4-channel STFT encoding [Re, Im, sin(phase),
// cos(phase)] of shape [4, F, T], and its subband-stacked view
// [4N, F/N, T] where channel block b holds frequency rows
// [b F/N, (b + 1) F/N).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monoloc::features {

enum class Window { kHann, kRectangular };

enum Channel : int { kReal = 0, kImag = 1, kSin = 2, kCos = 3 };
inline constexpr int kFeatureChannels = 4;

struct StftSpec {
  int frame_len = 512;  // 32 ms at 16 kHz
  int hop = 128;        // 8 ms
  int fft_size = 512;
  int freq_bins = 256;  // bins 0..255; the Nyquist bin is dropped
  Window window = Window::kHann;

  void validate() const;
};

// Number of frames for a segment of `length` samples (no centering, no
// padding). Zero when the segment is shorter than one frame.
int frame_count(std::size_t length, const StftSpec& spec);

struct FeatureTensor {
  int freq_bins = 0;
  int frames = 0;
  std::size_t segment_length = 0;
  std::vector<float> data;  // [4][F][T], row-major

  float at(int channel, int f, int t) const {
    return data[(static_cast<std::size_t>(channel) * freq_bins + f) * frames + t];
  }
  float& at(int channel, int f, int t) {
    return data[(static_cast<std::size_t>(channel) * freq_bins + f) * frames + t];
  }
};

struct SubbandTensor {
  int subbands = 0;
  int rows = 0;  // F / N
  int frames = 0;
  std::vector<float> data;  // [4N][F/N][T], row-major

  int channels() const { return kFeatureChannels * subbands; }
  float at(int channel, int row, int t) const {
    return data[(static_cast<std::size_t>(channel) * rows + row) * frames + t];
  }
  float& at(int channel, int row, int t) {
    return data[(static_cast<std::size_t>(channel) * rows + row) * frames + t];
  }
};

// Analysis window of length spec.frame_len (periodic Hann).
std::vector<double> analysis_window(const StftSpec& spec);

// Throws InvalidInput for segments shorter than one frame.
FeatureTensor stft_features(std::span<const double> segment, const StftSpec& spec = {});

// Throws InvalidInput unless n > 0 divides the number of frequency bins.
SubbandTensor to_subbands(const FeatureTensor& x, int n);
FeatureTensor from_subbands(const SubbandTensor& x);

}  // namespace monoloc::features
