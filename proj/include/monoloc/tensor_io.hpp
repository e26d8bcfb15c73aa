// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Debug/fixture tensor files:
//
//   bytes 0..3   magic "MLTF"
//   bytes 4..7   u32 LE format version (1)
//   bytes 8..11  u32 LE header length H
//   next H bytes UTF-8 JSON: {"meta": {...}, "tensors": [{"name", "shape", "offset"}]}
//   payload      float32 LE, row-major, offsets relative to payload start

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace monoloc::tensor_io {

inline constexpr std::uint32_t kVersion = 1;

struct NamedArray {
  std::string name;
  std::vector<std::int64_t> shape;
  std::vector<float> data;
};

struct TensorFile {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedArray> arrays;

  const NamedArray& get(const std::string& name) const;
};

std::vector<char> encode(const TensorFile& file);
TensorFile decode(const std::vector<char>& bytes);

void write(const std::filesystem::path& path, const TensorFile& file);
TensorFile read(const std::filesystem::path& path);

}  // namespace monoloc::tensor_io
