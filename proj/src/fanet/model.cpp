// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "layers.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::fanet {

using layers::Tensor3;
using Span = std::span<const float>;

double FrameOutputs::mean() const {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (float v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

struct BatchNorm {
  Span gamma, beta, mean, var;
};

struct Conv {
  Span weight, bias;
};

struct Block {
  Conv filter_conv;
  BatchNorm filter_bn;
  Span filter_prelu;
  std::array<Conv, 3> dw;
  Conv fuse;
  Conv query, key, value, proj;
  Span norm_gamma, norm_beta;
};

struct Model::Layers {
  Conv input_conv;
  BatchNorm input_bn;
  Span input_prelu;
  std::vector<Block> blocks;
  Span gru_w_ih, gru_w_hh, gru_b_ih, gru_b_hh;
  Conv head;
};

namespace {

Span data(const WeightContainer& w, const std::string& name) { return w.at(name).data; }

Conv conv(const WeightContainer& w, const std::string& prefix) {
  return {data(w, prefix + ".weight"), data(w, prefix + ".bias")};
}

BatchNorm batch_norm(const WeightContainer& w, const std::string& prefix) {
  return {data(w, prefix + ".weight"), data(w, prefix + ".bias"), data(w, prefix + ".running_mean"),
          data(w, prefix + ".running_var")};
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Model::Model(WeightContainer weights) {
  weights.validate();
  weights_ = std::make_shared<const WeightContainer>(std::move(weights));
  const WeightContainer& w = *weights_;
  auto l = std::make_shared<Layers>();
  l->input_conv = conv(w, "input.conv");
  l->input_bn = batch_norm(w, "input.bn");
  l->input_prelu = data(w, "input.prelu.weight");
  for (int b = 0; b < w.config.fa_blocks; ++b) {
    const std::string p = "blocks." + std::to_string(b);
    Block block;
    block.filter_conv = conv(w, p + ".filter.conv");
    block.filter_bn = batch_norm(w, p + ".filter.bn");
    block.filter_prelu = data(w, p + ".filter.prelu.weight");
    for (int k = 0; k < 3; ++k) block.dw[k] = conv(w, p + ".filter.dw" + std::to_string(k));
    block.fuse = conv(w, p + ".filter.fuse");
    block.query = conv(w, p + ".attn.query");
    block.key = conv(w, p + ".attn.key");
    block.value = conv(w, p + ".attn.value");
    block.proj = conv(w, p + ".attn.proj");
    block.norm_gamma = data(w, p + ".norm.weight");
    block.norm_beta = data(w, p + ".norm.bias");
    l->blocks.push_back(block);
  }
  l->gru_w_ih = data(w, "gru.weight_ih");
  l->gru_w_hh = data(w, "gru.weight_hh");
  l->gru_b_ih = data(w, "gru.bias_ih");
  l->gru_b_hh = data(w, "gru.bias_hh");
  l->head = conv(w, "head");
  layers_ = std::move(l);
}

Model Model::random(const FaNetConfig& config, std::uint64_t seed) {
  return Model(random_weights(config, seed));
}

namespace {

void filter_process(const FaNetConfig& cfg, const Block& b, Tensor3& x) {
  Tensor3 y = layers::conv1x1(x, b.filter_conv.weight, b.filter_conv.bias, cfg.channels);
  layers::batch_norm(y, b.filter_bn.gamma, b.filter_bn.beta, b.filter_bn.mean, b.filter_bn.var);
  layers::prelu(y, b.filter_prelu);
  std::array<Tensor3, 3> branch;
  for (int k = 0; k < 3; ++k) {
    branch[k] = layers::depthwise(y, b.dw[k].weight, b.dw[k].bias, cfg.kernels[k].freq, cfg.kernels[k].time);
  }
  // Grouped 1x1 fusion: group c sees branch 0..2 of channel c.
  const std::size_t plane = x.plane();
  for (int c = 0; c < cfg.channels; ++c) {
    const double w0 = b.fuse.weight[3 * c];
    const double w1 = b.fuse.weight[3 * c + 1];
    const double w2 = b.fuse.weight[3 * c + 2];
    const double bias = b.fuse.bias[c];
    const float* a0 = branch[0].channel(c);
    const float* a1 = branch[1].channel(c);
    const float* a2 = branch[2].channel(c);
    float* out = x.channel(c);
    for (std::size_t p = 0; p < plane; ++p) {
      out[p] += static_cast<float>(w0 * a0[p] + w1 * a1[p] + w2 * a2[p] + bias);
    }
  }
}

void self_attention(const FaNetConfig& cfg, const Block& b, Tensor3& x, int block_index,
                    const AttentionObserver& observer) {
  const int heads = cfg.attn_heads;
  const int qk_channels = heads * cfg.attn_channels;
  const int v_per_head = cfg.value_channels_per_head();
  const int frames = x.width;
  const Tensor3 q = layers::conv1x1(x, b.query.weight, b.query.bias, qk_channels);
  const Tensor3 k = layers::conv1x1(x, b.key.weight, b.key.bias, qk_channels);
  const Tensor3 v = layers::conv1x1(x, b.value.weight, b.value.bias, cfg.channels);

  const int qk_dim = cfg.attn_channels * x.height;
  const int v_dim = v_per_head * x.height;
  const double scale = 1.0 / std::sqrt(static_cast<double>(qk_dim));
  Tensor3 heads_out(cfg.channels, x.height, frames);
  std::vector<double> attn(static_cast<std::size_t>(frames) * frames);
  for (int h = 0; h < heads; ++h) {
    // Per head the channel block flattens to [dim][T] in row-major order.
    const float* qh = q.channel(h * cfg.attn_channels);
    const float* kh = k.channel(h * cfg.attn_channels);
    for (int t1 = 0; t1 < frames; ++t1) {
      for (int t2 = 0; t2 < frames; ++t2) {
        double s = 0.0;
        for (int d = 0; d < qk_dim; ++d) {
          s += static_cast<double>(qh[static_cast<std::size_t>(d) * frames + t1]) *
               kh[static_cast<std::size_t>(d) * frames + t2];
        }
        attn[static_cast<std::size_t>(t1) * frames + t2] = s * scale;
      }
      layers::softmax(std::span<double>(attn).subspan(static_cast<std::size_t>(t1) * frames, frames));
    }
    if (observer) observer(block_index, h, attn, frames);
    const float* vh = v.channel(h * v_per_head);
    float* oh = heads_out.channel(h * v_per_head);
    for (int d = 0; d < v_dim; ++d) {
      const float* vrow = vh + static_cast<std::size_t>(d) * frames;
      for (int t1 = 0; t1 < frames; ++t1) {
        const double* arow = attn.data() + static_cast<std::size_t>(t1) * frames;
        double s = 0.0;
        for (int t2 = 0; t2 < frames; ++t2) s += arow[t2] * vrow[t2];
        oh[static_cast<std::size_t>(d) * frames + t1] = static_cast<float>(s);
      }
    }
  }
  const Tensor3 projected = layers::conv1x1(heads_out, b.proj.weight, b.proj.bias, cfg.channels);
  for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] += projected.data[i];
}

void run_block(const FaNetConfig& cfg, const Block& b, Tensor3& x, int block_index, const ForwardOptions& options,
               const AttentionObserver& observer) {
  filter_process(cfg, b, x);
  self_attention(cfg, b, x, block_index, observer);
  if (!options.bypass_channel_norm) layers::channel_norm(x, b.norm_gamma, b.norm_beta);
}

}  // namespace

FrameOutputs Model::forward(const features::SubbandTensor& x, const ForwardOptions& options,
                            const AttentionObserver& observer) const {
  const FaNetConfig& cfg = config();
  if (x.channels() != cfg.input_channels() || x.rows != cfg.rows() || x.frames < 1 ||
      x.data.size() != static_cast<std::size_t>(x.channels()) * x.rows * x.frames) {
    throw InvalidInput("fanet forward: input [" + std::to_string(x.channels()) + ", " + std::to_string(x.rows) +
                       ", " + std::to_string(x.frames) + "] does not match [" +
                       std::to_string(cfg.input_channels()) + ", " + std::to_string(cfg.rows()) + ", T>=1]");
  }
  const Layers& l = *layers_;
  Tensor3 in(x.channels(), x.rows, x.frames);
  in.data = x.data;
  Tensor3 h = layers::conv1x1(in, l.input_conv.weight, l.input_conv.bias, cfg.channels);
  layers::batch_norm(h, l.input_bn.gamma, l.input_bn.beta, l.input_bn.mean, l.input_bn.var);
  layers::prelu(h, l.input_prelu);
  for (int b = 0; b < cfg.fa_blocks; ++b) run_block(cfg, l.blocks[b], h, b, options, observer);

  const int frames = x.frames;
  const int c = cfg.channels;
  const int g = cfg.gru_hidden;
  std::vector<double> pooled(static_cast<std::size_t>(c));
  std::vector<double> state(static_cast<std::size_t>(g), 0.0);
  std::vector<double> gi(3 * static_cast<std::size_t>(g));
  std::vector<double> gh(3 * static_cast<std::size_t>(g));
  FrameOutputs out;
  out.values.reserve(frames);
  for (int t = 0; t < frames; ++t) {
    for (int ch = 0; ch < c; ++ch) {
      const float* col = h.channel(ch) + t;
      double s = 0.0;
      for (int r = 0; r < h.height; ++r) s += col[static_cast<std::size_t>(r) * frames];
      pooled[ch] = s / h.height;
    }
    for (int i = 0; i < 3 * g; ++i) {
      double a = l.gru_b_ih[i];
      const float* wi = l.gru_w_ih.data() + static_cast<std::size_t>(i) * c;
      for (int ch = 0; ch < c; ++ch) a += wi[ch] * pooled[ch];
      gi[i] = a;
      double b = l.gru_b_hh[i];
      const float* wh = l.gru_w_hh.data() + static_cast<std::size_t>(i) * g;
      for (int j = 0; j < g; ++j) b += wh[j] * state[j];
      gh[i] = b;
    }
    // Gate order r, z, n.
    for (int j = 0; j < g; ++j) {
      const double r = sigmoid(gi[j] + gh[j]);
      const double z = sigmoid(gi[g + j] + gh[g + j]);
      const double n = std::tanh(gi[2 * g + j] + r * gh[2 * g + j]);
      state[j] = (1.0 - z) * n + z * state[j];
    }
    double y = l.head.bias[0];
    for (int j = 0; j < g; ++j) y += l.head.weight[j] * state[j];
    out.values.push_back(static_cast<float>(std::max(0.0, y)));
  }
  return out;
}

std::vector<float> Model::forward_block(int block, std::span<const float> x, int rows, int frames,
                                        const ForwardOptions& options) const {
  const FaNetConfig& cfg = config();
  if (block < 0 || block >= cfg.fa_blocks) throw InvalidInput("fanet: block index out of range");
  if (rows < 1 || frames < 1 || x.size() != static_cast<std::size_t>(cfg.channels) * rows * frames) {
    throw InvalidInput("fanet: block input has the wrong size");
  }
  Tensor3 t(cfg.channels, rows, frames);
  t.data.assign(x.begin(), x.end());
  run_block(cfg, layers_->blocks[block], t, block, options, {});
  return std::move(t.data);
}

}  // namespace monoloc::fanet
