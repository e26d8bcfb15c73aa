// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/weights.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "monoloc/detail/bytes.hpp"

namespace monoloc::fanet {
namespace {

using Kind = WeightFormatError::Kind;

std::string shape_string(const std::vector<std::int64_t>& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) out << (i ? ", " : "") << shape[i];
  out << ']';
  return out.str();
}

std::int64_t element_count(const std::vector<std::int64_t>& shape) {
  std::int64_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

// Uniform in [-bound, bound) from the top 53 bits, independent of the
// standard library's distribution implementations.
float uniform(std::mt19937_64& rng, double bound) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return static_cast<float>((2.0 * u - 1.0) * bound);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

bool WeightContainer::contains(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return true;
  }
  return false;
}

const Tensor& WeightContainer::at(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  throw WeightFormatError(Kind::kShapeMismatch, "weights: missing tensor '" + name + "'");
}

Tensor& WeightContainer::at(const std::string& name) {
  return const_cast<Tensor&>(static_cast<const WeightContainer&>(*this).at(name));
}

std::int64_t WeightContainer::parameter_element_count() const {
  std::int64_t n = 0;
  for (const auto& t : tensors) {
    if (t.role == TensorRole::kParameter) n += static_cast<std::int64_t>(t.data.size());
  }
  return n;
}

std::int64_t WeightContainer::buffer_element_count() const {
  std::int64_t n = 0;
  for (const auto& t : tensors) {
    if (t.role == TensorRole::kBuffer) n += static_cast<std::int64_t>(t.data.size());
  }
  return n;
}

void WeightContainer::validate() const {
  std::vector<TensorSpec> manifest;
  try {
    manifest = tensor_manifest(config);
  } catch (const std::exception& e) {
    throw WeightFormatError(Kind::kShapeMismatch, std::string("weights: invalid config: ") + e.what());
  }
  std::vector<std::string> problems;
  for (const auto& spec : manifest) {
    if (!contains(spec.name)) {
      problems.push_back(spec.name + ": missing (expected " + shape_string(spec.shape) + ")");
      continue;
    }
    const Tensor& t = at(spec.name);
    if (t.shape != spec.shape) {
      problems.push_back(spec.name + ": shape " + shape_string(t.shape) + ", expected " +
                         shape_string(spec.shape));
    } else if (static_cast<std::int64_t>(t.data.size()) != spec.size()) {
      problems.push_back(spec.name + ": " + std::to_string(t.data.size()) + " values for shape " +
                         shape_string(spec.shape));
    }
    if (t.role != spec.role) {
      problems.push_back(spec.name + ": role " + role_name(t.role) + ", expected " + role_name(spec.role));
    }
  }
  for (const auto& t : tensors) {
    bool known = false;
    for (const auto& spec : manifest) known = known || spec.name == t.name;
    if (!known) problems.push_back(t.name + ": not part of this architecture");
  }
  if (problems.empty() && parameter_element_count() != count_parameters(config)) {
    problems.push_back("parameter count " + std::to_string(parameter_element_count()) +
                       " differs from architecture count " + std::to_string(count_parameters(config)));
  }
  if (!problems.empty()) {
    std::string message = "weights do not match config:";
    for (const auto& p : problems) message += "\n  " + p;
    throw WeightFormatError(Kind::kShapeMismatch, message);
  }
}

std::vector<char> WeightContainer::to_bytes() const {
  nlohmann::json header;
  header["config"] = config.to_json();
  header["metadata"] = metadata;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& t : tensors) {
    if (element_count(t.shape) != static_cast<std::int64_t>(t.data.size())) {
      throw WeightFormatError(Kind::kShapeMismatch, "weights: tensor '" + t.name + "' size does not match shape");
    }
    header["tensors"].push_back(
        {{"name", t.name}, {"shape", t.shape}, {"role", role_name(t.role)}, {"offset", offset}});
    offset += t.data.size() * 4;
  }
  const std::string text = header.dump();
  std::vector<char> out(kWeightMagic, kWeightMagic + 4);
  detail::put_u32(out, kWeightFormatVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.reserve(out.size() + offset);
  for (const auto& t : tensors) {
    for (float v : t.data) detail::put_f32(out, v);
  }
  return out;
}

WeightContainer WeightContainer::from_bytes(std::span<const char> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kWeightMagic, 4) != 0) {
    throw WeightFormatError(Kind::kCorruptHeader, "weights: missing FANW magic");
  }
  const std::uint32_t version = detail::get_u32(bytes, 4);
  if (version != kWeightFormatVersion) {
    throw WeightFormatError(Kind::kVersionMismatch, "weights: format version " + std::to_string(version) +
                                                        ", this build reads version " +
                                                        std::to_string(kWeightFormatVersion));
  }
  const std::size_t header_len = detail::get_u32(bytes, 8);
  if (12 + header_len > bytes.size()) {
    throw WeightFormatError(Kind::kCorruptHeader, "weights: header extends past end of data");
  }

  WeightContainer container;
  std::vector<std::size_t> offsets;
  try {
    const auto header = nlohmann::json::parse(bytes.begin() + 12,
                                              bytes.begin() + 12 + static_cast<std::ptrdiff_t>(header_len));
    container.config = FaNetConfig::from_json(header.at("config"));
    container.metadata = header.value("metadata", nlohmann::json::object());
    for (const auto& entry : header.at("tensors")) {
      Tensor t;
      t.name = entry.at("name").get<std::string>();
      t.shape = entry.at("shape").get<std::vector<std::int64_t>>();
      t.role = role_from_name(entry.at("role").get<std::string>());
      for (auto d : t.shape) {
        if (d < 0) throw std::runtime_error("negative dimension in '" + t.name + "'");
      }
      offsets.push_back(entry.at("offset").get<std::size_t>());
      container.tensors.push_back(std::move(t));
    }
  } catch (const WeightFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw WeightFormatError(Kind::kCorruptHeader, std::string("weights: bad header: ") + e.what());
  }

  const std::size_t payload = 12 + header_len;
  std::size_t expected_offset = 0;
  for (std::size_t i = 0; i < container.tensors.size(); ++i) {
    Tensor& t = container.tensors[i];
    if (offsets[i] != expected_offset) {
      throw WeightFormatError(Kind::kCorruptHeader, "weights: tensor '" + t.name + "' is not contiguous");
    }
    const auto count = static_cast<std::size_t>(element_count(t.shape));
    if (payload + offsets[i] + count * 4 > bytes.size()) {
      throw WeightFormatError(Kind::kTruncatedPayload, "weights: payload truncated; tensor '" + t.name +
                                                           "' is incomplete");
    }
    t.data.resize(count);
    for (std::size_t k = 0; k < count; ++k) t.data[k] = detail::get_f32(bytes, payload + offsets[i] + 4 * k);
    expected_offset += count * 4;
  }
  if (payload + expected_offset != bytes.size()) {
    throw WeightFormatError(Kind::kTrailingData, "weights: " + std::to_string(bytes.size() - payload - expected_offset) +
                                                     " unexpected bytes after payload");
  }
  container.validate();
  return container;
}

void WeightContainer::save(const std::filesystem::path& path) const {
  const auto bytes = to_bytes();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

WeightContainer WeightContainer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_bytes(bytes);
}

WeightContainer random_weights(const FaNetConfig& config, std::uint64_t seed) {
  WeightContainer container;
  container.config = config;
  std::mt19937_64 rng(seed);
  const auto manifest = tensor_manifest(config);
  for (const auto& spec : manifest) {
    Tensor t;
    t.name = spec.name;
    t.shape = spec.shape;
    t.role = spec.role;
    t.data.assign(static_cast<std::size_t>(spec.size()), 0.0f);
    const bool batch_norm = spec.name.find(".bn.") != std::string::npos;
    const bool channel_norm = spec.name.find(".norm.") != std::string::npos;
    if (ends_with(spec.name, "running_var")) {
      std::fill(t.data.begin(), t.data.end(), 1.0f);
    } else if (ends_with(spec.name, "running_mean")) {
      // zeros
    } else if ((batch_norm || channel_norm) && ends_with(spec.name, ".weight")) {
      std::fill(t.data.begin(), t.data.end(), 1.0f);
    } else if ((batch_norm || channel_norm) && ends_with(spec.name, ".bias")) {
      // zeros
    } else if (ends_with(spec.name, "prelu.weight")) {
      std::fill(t.data.begin(), t.data.end(), 0.25f);
    } else {
      double bound;
      if (spec.name.rfind("gru.", 0) == 0) {
        bound = 1.0 / std::sqrt(static_cast<double>(config.gru_hidden));
      } else {
        // Fan-in of the layer this tensor belongs to, read from the weight
        // shape [out, in/groups, kh, kw] or [out, in].
        const std::string weight_name = spec.name.substr(0, spec.name.rfind('.')) + ".weight";
        std::int64_t fan_in = 1;
        for (const auto& other : manifest) {
          if (other.name != weight_name) continue;
          for (std::size_t d = 1; d < other.shape.size(); ++d) fan_in *= other.shape[d];
        }
        bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      }
      for (float& v : t.data) v = uniform(rng, bound);
    }
    container.tensors.push_back(std::move(t));
  }
  return container;
}

}  // namespace monoloc::fanet
