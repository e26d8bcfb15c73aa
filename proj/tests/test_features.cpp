// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <set>

#include <doctest.h>

#include "monoloc/errors.hpp"
#include "monoloc/features.hpp"
#include "monoloc/tensor_io.hpp"
#include "support.hpp"

using namespace monoloc;
using namespace monoloc::features;

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST_CASE("frame count follows 1 + (L - frame) / hop") {
  const StftSpec spec;
  CHECK(frame_count(3200, spec) == 22);
  CHECK(frame_count(512, spec) == 1);
  CHECK(frame_count(511, spec) == 0);
  CHECK(frame_count(6400, spec) == 47);
  for (std::size_t len = 512; len < 5000; len += 37) {
    CHECK(frame_count(len, spec) == static_cast<int>(1 + (len - 512) / 128));
  }
}

TEST_CASE("short segments are rejected") {
  const std::vector<double> x(511, 0.0);
  CHECK_THROWS_AS(stft_features(x), InvalidInput);
}

TEST_CASE("0.2 s segment gives [4, 256, 22]") {
  const auto f = stft_features(white_noise(3200, 1));
  CHECK(f.freq_bins == 256);
  CHECK(f.frames == 22);
  CHECK(f.segment_length == 3200);
  CHECK(f.data.size() == 4u * 256u * 22u);
}

TEST_CASE("silence encodes as zero magnitude with phase 0") {
  const std::vector<double> x(1024, 0.0);
  const auto f = stft_features(x);
  for (int k = 0; k < f.freq_bins; ++k) {
    for (int t = 0; t < f.frames; ++t) {
      CHECK(f.at(kReal, k, t) == 0.0f);
      CHECK(f.at(kImag, k, t) == 0.0f);
      CHECK(f.at(kSin, k, t) == 0.0f);
      CHECK(f.at(kCos, k, t) == 1.0f);
    }
  }
}

TEST_CASE("bin-centred sinusoid concentrates in its bin; values match a direct DFT") {
  const int bin = 40;
  std::vector<double> x(1024);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = std::cos(2.0 * std::numbers::pi * bin * n / 512.0 + 0.3);
  const StftSpec spec;
  const auto f = stft_features(x, spec);
  const auto w = analysis_window(spec);
  for (int t = 0; t < f.frames; ++t) {
    const double target = std::hypot(f.at(kReal, bin, t), f.at(kImag, bin, t));
    for (int k = 0; k < f.freq_bins; ++k) {
      if (std::abs(k - bin) <= 1) continue;
      CHECK(target >= 10.0 * std::hypot(f.at(kReal, k, t), f.at(kImag, k, t)));
    }
    const std::span<const double> frame(x.data() + t * spec.hop, spec.frame_len);
    for (int k : {0, bin - 1, bin, bin + 1, 100, 255}) {
      const auto ref = testing::direct_dft_bin(frame, w, static_cast<std::size_t>(k), 512);
      CHECK(f.at(kReal, k, t) == doctest::Approx(ref.real()).epsilon(1e-5).scale(1.0));
      CHECK(f.at(kImag, k, t) == doctest::Approx(ref.imag()).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("window is periodic Hann") {
  const auto w = analysis_window({});
  REQUIRE(w.size() == 512);
  CHECK(w[0] == 0.0);
  CHECK(w[256] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(w[511]));
}

TEST_CASE("phase channels are a unit vector consistent with Re and Im") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(512, 8000);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = white_noise(len(rng), trial);
    const auto f = stft_features(x);
    for (int k = 0; k < f.freq_bins; ++k) {
      for (int t = 0; t < f.frames; ++t) {
        const double s = f.at(kSin, k, t), c = f.at(kCos, k, t);
        CHECK(std::abs(s * s + c * c - 1.0) <= 1e-6);
        CHECK(std::abs(s) <= 1.0);
        CHECK(std::abs(c) <= 1.0);
        const double re = f.at(kReal, k, t), im = f.at(kImag, k, t);
        const double mag = std::hypot(re, im);
        CHECK(std::abs(mag * c - re) <= 1e-6 * std::max(1.0, mag));
        CHECK(std::abs(mag * s - im) <= 1e-6 * std::max(1.0, mag));
      }
    }
  }
}

TEST_CASE("spectral energy matches windowed frame energy for white noise") {
  const StftSpec spec;
  const auto x = white_noise(16000, 3);
  const auto f = stft_features(x, spec);
  const auto w = analysis_window(spec);
  double spectral = 0.0, temporal = 0.0;
  for (int t = 0; t < f.frames; ++t) {
    for (int k = 0; k < f.freq_bins; ++k) {
      const double e = f.at(kReal, k, t) * f.at(kReal, k, t) + f.at(kImag, k, t) * f.at(kImag, k, t);
      spectral += k == 0 ? e : 2.0 * e;  // one-sided spectrum
    }
    for (int n = 0; n < spec.frame_len; ++n) {
      const double v = w[n] * x[t * spec.hop + n];
      temporal += v * v;
    }
  }
  CHECK(spectral / (spec.fft_size * temporal) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("features are deterministic") {
  const auto x = white_noise(3200, 8);
  CHECK(stft_features(x).data == stft_features(x).data);
}

TEST_SUITE("subbands") {
  TEST_CASE("default split gives [64, 16, T] with contiguous frequency blocks") {
    const auto f = stft_features(white_noise(3200, 2));
    const auto s = to_subbands(f, 16);
    CHECK(s.channels() == 64);
    CHECK(s.rows == 16);
    CHECK(s.frames == 22);
    for (int b = 0; b < 16; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 16; ++r) {
          for (int t = 0; t < 22; ++t) CHECK(s.at(4 * b + c, r, t) == f.at(c, 16 * b + r, t));
        }
      }
    }
  }

  TEST_CASE("N = 1 keeps the data order") {
    const auto f = stft_features(white_noise(1000, 4));
    const auto s = to_subbands(f, 1);
    CHECK(s.channels() == 4);
    CHECK(s.rows == 256);
    CHECK(s.data == f.data);
  }

  TEST_CASE("round trip is exact and the split is a bijection") {
    const auto f = stft_features(white_noise(4000, 5));
    for (int n : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
      const auto s = to_subbands(f, n);
      CHECK(from_subbands(s).data == f.data);
      std::multiset<float> a(f.data.begin(), f.data.end()), b(s.data.begin(), s.data.end());
      CHECK(a == b);
    }
  }

  TEST_CASE("non-divisors are rejected") {
    const auto f = stft_features(white_noise(1000, 6));
    CHECK_THROWS_AS(to_subbands(f, 3), InvalidInput);
    CHECK_THROWS_AS(to_subbands(f, 0), InvalidInput);
  }
}

TEST_CASE("tensor file round trip") {
  tensor_io::TensorFile file;
  file.meta = {{"note", "x"}};
  file.arrays.push_back({"a", {2, 3}, {1, 2, 3, 4, 5, 6}});
  file.arrays.push_back({"b", {1}, {-0.5f}});
  const auto bytes = tensor_io::encode(file);
  const auto back = tensor_io::decode(bytes);
  CHECK(back.meta == file.meta);
  CHECK(back.get("a").data == file.arrays[0].data);
  CHECK(back.get("a").shape == file.arrays[0].shape);
  CHECK(tensor_io::encode(back) == bytes);
  CHECK_THROWS_AS(back.get("c"), InvalidInput);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(tensor_io::decode(truncated), InvalidInput);
}
