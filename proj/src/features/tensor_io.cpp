// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>

#include "monoloc/detail/bytes.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::tensor_io {
namespace {

constexpr char kMagic[4] = {'M', 'L', 'T', 'F'};

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1}, std::multiplies<>());
}

}  // namespace

const NamedArray& TensorFile::get(const std::string& name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a;
  }
  throw InvalidInput("tensor file has no array named '" + name + "'");
}

std::vector<char> encode(const TensorFile& file) {
  nlohmann::json header;
  header["meta"] = file.meta;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& a : file.arrays) {
    if (element_count(a.shape) != static_cast<std::int64_t>(a.data.size())) {
      throw InvalidInput("tensor '" + a.name + "' data does not match its shape");
    }
    header["tensors"].push_back({{"name", a.name}, {"shape", a.shape}, {"offset", offset}});
    offset += a.data.size() * 4;
  }
  const std::string text = header.dump();
  std::vector<char> out(kMagic, kMagic + 4);
  detail::put_u32(out, kVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& a : file.arrays) {
    for (float v : a.data) detail::put_f32(out, v);
  }
  return out;
}

TensorFile decode(const std::vector<char>& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw InvalidInput("not a tensor file (bad magic)");
  }
  if (detail::get_u32(bytes, 4) != kVersion) throw InvalidInput("unsupported tensor file version");
  const std::size_t header_len = detail::get_u32(bytes, 8);
  if (12 + header_len > bytes.size()) throw InvalidInput("tensor file header truncated");
  const auto header = nlohmann::json::parse(bytes.begin() + 12,
                                            bytes.begin() + 12 + static_cast<std::ptrdiff_t>(header_len));
  const std::size_t payload = 12 + header_len;
  TensorFile file;
  file.meta = header.value("meta", nlohmann::json::object());
  for (const auto& entry : header.at("tensors")) {
    NamedArray a;
    a.name = entry.at("name").get<std::string>();
    a.shape = entry.at("shape").get<std::vector<std::int64_t>>();
    const auto offset = entry.at("offset").get<std::size_t>();
    const auto count = static_cast<std::size_t>(element_count(a.shape));
    if (payload + offset + count * 4 > bytes.size()) {
      throw InvalidInput("tensor file payload truncated at '" + a.name + "'");
    }
    a.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) a.data[i] = detail::get_f32(bytes, payload + offset + 4 * i);
    file.arrays.push_back(std::move(a));
  }
  return file;
}

void write(const std::filesystem::path& path, const TensorFile& file) {
  const auto bytes = encode(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TensorFile read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode(bytes);
}

}  // namespace monoloc::tensor_io
