// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "monoloc/features.hpp"
#include "monoloc/weights.hpp"

namespace monoloc::fanet {

// Per-frame distance estimates in meters, one per input frame.
struct FrameOutputs {
  std::vector<float> values;

  // Arithmetic mean over frames; the per-segment measurement.
  double mean() const;
};

struct ForwardOptions {
  // Replace every channel normalization with the identity.
  bool bypass_channel_norm = false;
};

// Receives each attention matrix during forward(): weights is frames x frames,
// row t1 holds the softmax over key frames t2 for query frame t1.
using AttentionObserver =
    std::function<void(int block, int head, std::span<const double> weights, int frames)>;

// Immutable FA-Net instance. Copies share the underlying weights; forward is
// reentrant.
class Model {
 public:
  // Throws WeightFormatError(kShapeMismatch) if the tensors do not match the
  // container's config.
  explicit Model(WeightContainer weights);

  static Model random(const FaNetConfig& config, std::uint64_t seed);

  const FaNetConfig& config() const { return weights_->config; }
  const WeightContainer& weights() const { return *weights_; }
  WeightContainer save_weights() const { return *weights_; }

  // Throws InvalidInput when x does not have config().input_channels()
  // channels and config().rows() rows, or has no frames.
  FrameOutputs forward(const features::SubbandTensor& x, const ForwardOptions& options = {},
                       const AttentionObserver& observer = {}) const;

  // One FA block applied to a [C][rows][frames] activation.
  std::vector<float> forward_block(int block, std::span<const float> x, int rows, int frames,
                                   const ForwardOptions& options = {}) const;

 private:
  struct Layers;

  std::shared_ptr<const WeightContainer> weights_;
  std::shared_ptr<const Layers> layers_;
};

}  // namespace monoloc::fanet
