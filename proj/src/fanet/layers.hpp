// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference kernels for the FA-Net forward pass. Single sample, CHW float
// tensors, accumulation in double.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace monoloc::fanet::layers {

struct Tensor3 {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  Tensor3() = default;
  Tensor3(int c, int h, int w) : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, 0.0f) {}

  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  float* channel(int c) { return data.data() + static_cast<std::size_t>(c) * plane(); }
  const float* channel(int c) const { return data.data() + static_cast<std::size_t>(c) * plane(); }
};

// out[o] = sum_i weight[o][i] * in[i] + bias[o]; weight is [out][in].
Tensor3 conv1x1(const Tensor3& in, std::span<const float> weight, std::span<const float> bias, int out_channels);

// Inference batch norm with running statistics, in place.
void batch_norm(Tensor3& x, std::span<const float> gamma, std::span<const float> beta,
                std::span<const float> mean, std::span<const float> var, float eps = 1e-5f);

// slope has one entry (shared) or one per channel.
void prelu(Tensor3& x, std::span<const float> slope);

// Per-channel 2-D convolution, zero "same" padding for odd kernels.
// weight is [C][kh][kw].
Tensor3 depthwise(const Tensor3& in, std::span<const float> weight, std::span<const float> bias, int kh, int kw);

// Normalization across channels at every (h, w), learnable per-channel
// scale/shift, in place.
void channel_norm(Tensor3& x, std::span<const float> gamma, std::span<const float> beta, float eps = 1e-5f);

// In-place numerically stable softmax.
void softmax(std::span<double> row);

}  // namespace monoloc::fanet::layers
