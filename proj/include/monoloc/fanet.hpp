// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// FA-Net: a subband filter-attention network regressing source distance per
// STFT frame.
//
//   subbands [4N, F/N, T]
//     -> 1x1 conv (4N -> C) + BN + PReLU
//     -> fa_blocks x FA block
//     -> mean over the F/N rows -> GRU (C -> gru_hidden) -> linear -> ReLU
//
// FA block:
//   filter:    1x1 conv + BN + PReLU, three depth-wise convs (kernels
//              1x3, 3x7, 7x15, same padding), per-channel fusion of the three
//              branches, residual add of the block input
//   attention: 1x1 convs to Q, K (heads x attn_channels) and V (C); per head
//              softmax(Q^T K / sqrt(attn_channels * F/N)) over time; heads
//              concatenated, 1x1 output projection, residual add
//   channel normalization across C at every (f, t)
//
// Tensor names and layouts follow PyTorch conventions ([out, in/groups, kh, kw]
// for convolutions, r/z/n gate order for the GRU) so weights exported from a
// PyTorch definition load directly.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace monoloc::fanet {

struct KernelSize {
  int freq = 1;
  int time = 1;

  friend bool operator==(const KernelSize&, const KernelSize&) = default;
};

struct FaNetConfig {
  int subbands = 16;
  int channels = 32;
  int fa_blocks = 4;
  int attn_heads = 4;
  int attn_channels = 4;
  int gru_hidden = 32;
  int freq_bins = 256;
  std::array<KernelSize, 3> kernels{{{1, 3}, {3, 7}, {7, 15}}};

  void validate() const;
  int rows() const { return freq_bins / subbands; }
  int input_channels() const { return 4 * subbands; }
  int value_channels_per_head() const { return channels / attn_heads; }

  nlohmann::json to_json() const;
  static FaNetConfig from_json(const nlohmann::json& j);

  friend bool operator==(const FaNetConfig&, const FaNetConfig&) = default;
};

// Learnable tensors versus inference-only statistics (BN running mean/var).
enum class TensorRole { kParameter, kBuffer };

const char* role_name(TensorRole role);
TensorRole role_from_name(const std::string& name);

struct TensorSpec {
  std::string name;
  std::vector<std::int64_t> shape;
  TensorRole role = TensorRole::kParameter;

  std::int64_t size() const;
};

// Every tensor the model owns, in serialization order.
std::vector<TensorSpec> tensor_manifest(const FaNetConfig& config);

// Learnable parameter count, computed from the layer formulas.
std::int64_t count_parameters(const FaNetConfig& config);

// BN running statistics stored alongside the parameters.
std::int64_t count_buffers(const FaNetConfig& config);

// Multiply-accumulates for one forward pass over `frames` frames: convolutions
// (full kernel per output), attention products, GRU and output layer.
// Normalization and activations are not counted.
std::int64_t count_macs(const FaNetConfig& config, int frames);

}  // namespace monoloc::fanet
