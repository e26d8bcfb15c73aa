// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "layers.hpp"

#include <algorithm>
#include <cmath>

namespace monoloc::fanet::layers {

Tensor3 conv1x1(const Tensor3& in, std::span<const float> weight, std::span<const float> bias, int out_channels) {
  Tensor3 out(out_channels, in.height, in.width);
  const std::size_t plane = in.plane();
  std::vector<double> acc(plane);
  for (int o = 0; o < out_channels; ++o) {
    std::fill(acc.begin(), acc.end(), static_cast<double>(bias[o]));
    const float* w = weight.data() + static_cast<std::size_t>(o) * in.channels;
    for (int i = 0; i < in.channels; ++i) {
      const double wi = w[i];
      if (wi == 0.0) continue;
      const float* src = in.channel(i);
      for (std::size_t p = 0; p < plane; ++p) acc[p] += wi * src[p];
    }
    float* dst = out.channel(o);
    for (std::size_t p = 0; p < plane; ++p) dst[p] = static_cast<float>(acc[p]);
  }
  return out;
}

void batch_norm(Tensor3& x, std::span<const float> gamma, std::span<const float> beta,
                std::span<const float> mean, std::span<const float> var, float eps) {
  const std::size_t plane = x.plane();
  for (int c = 0; c < x.channels; ++c) {
    const double scale = gamma[c] / std::sqrt(static_cast<double>(var[c]) + eps);
    const double shift = beta[c] - mean[c] * scale;
    float* v = x.channel(c);
    for (std::size_t p = 0; p < plane; ++p) v[p] = static_cast<float>(v[p] * scale + shift);
  }
}

void prelu(Tensor3& x, std::span<const float> slope) {
  const std::size_t plane = x.plane();
  for (int c = 0; c < x.channels; ++c) {
    const float a = slope.size() == 1 ? slope[0] : slope[c];
    float* v = x.channel(c);
    for (std::size_t p = 0; p < plane; ++p) {
      if (v[p] < 0.0f) v[p] *= a;
    }
  }
}

Tensor3 depthwise(const Tensor3& in, std::span<const float> weight, std::span<const float> bias, int kh, int kw) {
  Tensor3 out(in.channels, in.height, in.width);
  const int ph = kh / 2;
  const int pw = kw / 2;
  for (int c = 0; c < in.channels; ++c) {
    const float* src = in.channel(c);
    const float* k = weight.data() + static_cast<std::size_t>(c) * kh * kw;
    float* dst = out.channel(c);
    for (int h = 0; h < in.height; ++h) {
      for (int w = 0; w < in.width; ++w) {
        double acc = bias[c];
        for (int i = 0; i < kh; ++i) {
          const int hh = h + i - ph;
          if (hh < 0 || hh >= in.height) continue;
          const float* row = src + static_cast<std::size_t>(hh) * in.width;
          const float* krow = k + static_cast<std::size_t>(i) * kw;
          for (int j = 0; j < kw; ++j) {
            const int ww = w + j - pw;
            if (ww < 0 || ww >= in.width) continue;
            acc += static_cast<double>(krow[j]) * row[ww];
          }
        }
        dst[static_cast<std::size_t>(h) * in.width + w] = static_cast<float>(acc);
      }
    }
  }
  return out;
}

void channel_norm(Tensor3& x, std::span<const float> gamma, std::span<const float> beta, float eps) {
  const std::size_t plane = x.plane();
  for (std::size_t p = 0; p < plane; ++p) {
    double mean = 0.0;
    for (int c = 0; c < x.channels; ++c) mean += x.channel(c)[p];
    mean /= x.channels;
    double var = 0.0;
    for (int c = 0; c < x.channels; ++c) {
      const double d = x.channel(c)[p] - mean;
      var += d * d;
    }
    var /= x.channels;
    const double inv = 1.0 / std::sqrt(var + eps);
    for (int c = 0; c < x.channels; ++c) {
      float& v = x.channel(c)[p];
      v = static_cast<float>((v - mean) * inv * gamma[c] + beta[c]);
    }
  }
}

void softmax(std::span<double> row) {
  const double peak = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double& v : row) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : row) v /= sum;
}

}  // namespace monoloc::fanet::layers
