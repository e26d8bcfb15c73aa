// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "monoloc/acoustics.hpp"
#include "monoloc/errors.hpp"

namespace monoloc::acoustics {
namespace {

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u16(std::vector<char>& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}
void put_tag(std::vector<char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

std::uint32_t get_u32(const std::vector<char>& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}
std::uint16_t get_u16(const std::vector<char>& in, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(in[at]) |
                                    (static_cast<unsigned char>(in[at + 1]) << 8));
}

}  // namespace

void write_wav_f32(const std::filesystem::path& path, std::span<const double> samples,
                   double sample_rate_hz) {
  const auto rate = static_cast<std::uint32_t>(std::llround(sample_rate_hz));
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  std::vector<char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 3);  // IEEE float
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * 4);
  put_u16(out, 4);
  put_u16(out, 32);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : samples) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));

  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

Signal read_wav_f32(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string());
  const std::vector<char> in((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (in.size() < 12 || std::memcmp(in.data(), "RIFF", 4) != 0 || std::memcmp(in.data() + 8, "WAVE", 4) != 0) {
    throw InvalidInput("not a RIFF/WAVE file: " + path.string());
  }
  Signal out;
  bool have_format = false;
  std::size_t at = 12;
  while (at + 8 <= in.size()) {
    const std::string tag(in.data() + at, 4);
    const std::uint32_t size = get_u32(in, at + 4);
    const std::size_t body = at + 8;
    if (body + size > in.size()) throw InvalidInput("truncated WAV chunk " + tag);
    if (tag == "fmt ") {
      if (get_u16(in, body) != 3 || get_u16(in, body + 2) != 1 || get_u16(in, body + 14) != 32) {
        throw InvalidInput("expected mono 32-bit float WAV");
      }
      out.sample_rate_hz = get_u32(in, body + 4);
      have_format = true;
    } else if (tag == "data") {
      if (!have_format) throw InvalidInput("WAV data chunk before fmt chunk");
      out.samples.resize(size / 4);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = std::bit_cast<float>(get_u32(in, body + 4 * i));
      }
      return out;
    }
    at = body + size + (size & 1);
  }
  throw InvalidInput("WAV file has no data chunk");
}

}  // namespace monoloc::acoustics
