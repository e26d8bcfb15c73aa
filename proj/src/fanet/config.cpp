// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <functional>
#include <numeric>
#include <string>

#include "monoloc/errors.hpp"
#include "monoloc/fanet.hpp"

namespace monoloc::fanet {

void FaNetConfig::validate() const {
  if (subbands <= 0 || channels <= 0 || fa_blocks < 0 || attn_heads <= 0 || attn_channels <= 0 ||
      gru_hidden <= 0 || freq_bins <= 0) {
    throw InvalidInput("fanet config: sizes must be positive");
  }
  if (freq_bins % subbands != 0) throw InvalidInput("fanet config: subbands must divide freq_bins");
  if (channels % attn_heads != 0) throw InvalidInput("fanet config: attn_heads must divide channels");
  for (const auto& k : kernels) {
    if (k.freq <= 0 || k.time <= 0 || k.freq % 2 == 0 || k.time % 2 == 0) {
      throw InvalidInput("fanet config: kernel sizes must be positive and odd");
    }
  }
}

nlohmann::json FaNetConfig::to_json() const {
  nlohmann::json kernel_list = nlohmann::json::array();
  for (const auto& k : kernels) kernel_list.push_back({k.freq, k.time});
  return {{"subbands", subbands},     {"channels", channels},   {"fa_blocks", fa_blocks},
          {"attn_heads", attn_heads}, {"attn_channels", attn_channels},
          {"gru_hidden", gru_hidden}, {"freq_bins", freq_bins}, {"kernels", kernel_list}};
}

FaNetConfig FaNetConfig::from_json(const nlohmann::json& j) {
  FaNetConfig c;
  c.subbands = j.value("subbands", c.subbands);
  c.channels = j.value("channels", c.channels);
  c.fa_blocks = j.value("fa_blocks", c.fa_blocks);
  c.attn_heads = j.value("attn_heads", c.attn_heads);
  c.attn_channels = j.value("attn_channels", c.attn_channels);
  c.gru_hidden = j.value("gru_hidden", c.gru_hidden);
  c.freq_bins = j.value("freq_bins", c.freq_bins);
  if (j.contains("kernels")) {
    const auto& ks = j.at("kernels");
    if (!ks.is_array() || ks.size() != 3) throw InvalidInput("fanet config: expected three kernels");
    for (std::size_t i = 0; i < 3; ++i) {
      c.kernels[i] = {ks[i].at(0).get<int>(), ks[i].at(1).get<int>()};
    }
  }
  c.validate();
  return c;
}

const char* role_name(TensorRole role) {
  return role == TensorRole::kParameter ? "parameter" : "buffer";
}

TensorRole role_from_name(const std::string& name) {
  if (name == "parameter") return TensorRole::kParameter;
  if (name == "buffer") return TensorRole::kBuffer;
  throw InvalidInput("unknown tensor role '" + name + "'");
}

std::int64_t TensorSpec::size() const {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1}, std::multiplies<>());
}

std::vector<TensorSpec> tensor_manifest(const FaNetConfig& config) {
  config.validate();
  const std::int64_t c = config.channels;
  const std::int64_t qk = static_cast<std::int64_t>(config.attn_heads) * config.attn_channels;
  const std::int64_t g = config.gru_hidden;
  std::vector<TensorSpec> specs;
  const auto param = [&](std::string name, std::vector<std::int64_t> shape) {
    specs.push_back({std::move(name), std::move(shape), TensorRole::kParameter});
  };
  const auto batch_norm = [&](const std::string& prefix) {
    param(prefix + ".weight", {c});
    param(prefix + ".bias", {c});
    specs.push_back({prefix + ".running_mean", {c}, TensorRole::kBuffer});
    specs.push_back({prefix + ".running_var", {c}, TensorRole::kBuffer});
  };

  param("input.conv.weight", {c, config.input_channels(), 1, 1});
  param("input.conv.bias", {c});
  batch_norm("input.bn");
  param("input.prelu.weight", {1});

  for (int b = 0; b < config.fa_blocks; ++b) {
    const std::string p = "blocks." + std::to_string(b);
    param(p + ".filter.conv.weight", {c, c, 1, 1});
    param(p + ".filter.conv.bias", {c});
    batch_norm(p + ".filter.bn");
    param(p + ".filter.prelu.weight", {1});
    for (int k = 0; k < 3; ++k) {
      const std::string dw = p + ".filter.dw" + std::to_string(k);
      param(dw + ".weight", {c, 1, config.kernels[k].freq, config.kernels[k].time});
      param(dw + ".bias", {c});
    }
    param(p + ".filter.fuse.weight", {c, 3, 1, 1});
    param(p + ".filter.fuse.bias", {c});
    param(p + ".attn.query.weight", {qk, c, 1, 1});
    param(p + ".attn.query.bias", {qk});
    param(p + ".attn.key.weight", {qk, c, 1, 1});
    param(p + ".attn.key.bias", {qk});
    param(p + ".attn.value.weight", {c, c, 1, 1});
    param(p + ".attn.value.bias", {c});
    param(p + ".attn.proj.weight", {c, c, 1, 1});
    param(p + ".attn.proj.bias", {c});
    param(p + ".norm.weight", {c});
    param(p + ".norm.bias", {c});
  }

  param("gru.weight_ih", {3 * g, c});
  param("gru.weight_hh", {3 * g, g});
  param("gru.bias_ih", {3 * g});
  param("gru.bias_hh", {3 * g});
  param("head.weight", {1, g});
  param("head.bias", {1});
  return specs;
}

std::int64_t count_parameters(const FaNetConfig& config) {
  config.validate();
  const std::int64_t c = config.channels;
  const std::int64_t qk = static_cast<std::int64_t>(config.attn_heads) * config.attn_channels;
  const std::int64_t g = config.gru_hidden;
  const auto conv1x1 = [](std::int64_t in, std::int64_t out) { return in * out + out; };
  const std::int64_t bn = 2 * c;
  const std::int64_t prelu = 1;

  std::int64_t filter = conv1x1(c, c) + bn + prelu;
  for (const auto& k : config.kernels) filter += static_cast<std::int64_t>(k.freq) * k.time * c + c;
  filter += 3 * c + c;  // grouped fusion, 3 inputs per group
  const std::int64_t attention = 2 * conv1x1(c, qk) + conv1x1(c, c) + conv1x1(c, c);
  const std::int64_t norm = 2 * c;

  const std::int64_t input = conv1x1(config.input_channels(), c) + bn + prelu;
  const std::int64_t gru = 3 * g * c + 3 * g * g + 6 * g;
  const std::int64_t head = g + 1;
  return input + config.fa_blocks * (filter + attention + norm) + gru + head;
}

std::int64_t count_buffers(const FaNetConfig& config) {
  config.validate();
  return static_cast<std::int64_t>(1 + config.fa_blocks) * 2 * config.channels;
}

std::int64_t count_macs(const FaNetConfig& config, int frames) {
  config.validate();
  const std::int64_t t = frames;
  const std::int64_t c = config.channels;
  const std::int64_t r = config.rows();
  const std::int64_t plane = r * t;
  const std::int64_t qk = static_cast<std::int64_t>(config.attn_heads) * config.attn_channels;
  const std::int64_t g = config.gru_hidden;

  std::int64_t block = c * c * plane;  // filter 1x1
  for (const auto& k : config.kernels) block += static_cast<std::int64_t>(k.freq) * k.time * c * plane;
  block += 3 * c * plane;                                              // fusion
  block += 2 * qk * c * plane + c * c * plane;                         // Q, K, V
  block += config.attn_heads * t * t * (config.attn_channels * r);     // Q^T K
  block += config.attn_heads * t * t * (config.value_channels_per_head() * r);  // A V
  block += c * c * plane;                                              // output projection

  const std::int64_t input = static_cast<std::int64_t>(config.input_channels()) * c * plane;
  const std::int64_t gru = t * 3 * g * (c + g);
  const std::int64_t head = t * g;
  return input + config.fa_blocks * block + gru + head;
}

}  // namespace monoloc::fanet
