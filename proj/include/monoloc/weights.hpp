// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// FA-Net weight container (".fanw").
//
//   offset  size  field
//   0       4     magic "FANW"
//   4       4     format version, u32 little-endian (currently 1)
//   8       4     header length H in bytes, u32 little-endian
//   12      H     UTF-8 JSON header:
//                   {"config":   FaNetConfig fields,
//                    "metadata": free-form object (e.g. "validation_mae_m"),
//                    "tensors":  [{"name", "shape", "role", "offset"}, ...]}
//   12 + H  ...   payload: float32 little-endian, row-major; each tensor's
//                 "offset" is in bytes from the payload start
//
// Tensors are stored contiguously in manifest order with no padding. The JSON
// header is written with sorted keys and no whitespace, so save -> load -> save
// is byte-identical.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "monoloc/fanet.hpp"

namespace monoloc::fanet {

inline constexpr char kWeightMagic[4] = {'F', 'A', 'N', 'W'};
inline constexpr std::uint32_t kWeightFormatVersion = 1;

class WeightFormatError : public std::runtime_error {
 public:
  enum class Kind {
    kCorruptHeader,
    kVersionMismatch,
    kTruncatedPayload,
    kTrailingData,
    kShapeMismatch,
  };

  WeightFormatError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Tensor {
  std::string name;
  std::vector<std::int64_t> shape;
  TensorRole role = TensorRole::kParameter;
  std::vector<float> data;
};

class WeightContainer {
 public:
  FaNetConfig config;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Tensor> tensors;

  bool contains(const std::string& name) const;
  const Tensor& at(const std::string& name) const;
  Tensor& at(const std::string& name);

  std::int64_t parameter_element_count() const;
  std::int64_t buffer_element_count() const;

  // Checks the tensors against tensor_manifest(config) and the analytic
  // parameter count. Throws WeightFormatError(kShapeMismatch) listing every
  // offending tensor.
  void validate() const;

  std::vector<char> to_bytes() const;
  static WeightContainer from_bytes(std::span<const char> bytes);

  void save(const std::filesystem::path& path) const;
  static WeightContainer load(const std::filesystem::path& path);
};

// Deterministic initialization: conv/linear weights and biases uniform in
// +-1/sqrt(fan_in), GRU in +-1/sqrt(hidden), BN and channel norm at identity,
// PReLU slope 0.25.
WeightContainer random_weights(const FaNetConfig& config, std::uint64_t seed);

}  // namespace monoloc::fanet
