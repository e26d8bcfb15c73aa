// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace monoloc::harness {

// Independent RNG streams derived from the scenario seed.
inline constexpr std::uint64_t kNoiseStream = 1;
inline constexpr std::uint64_t kOracleStream = 2;
inline constexpr std::uint64_t kCalibrationStream = 3;

std::uint64_t stream_seed(std::uint64_t scenario_seed, std::uint64_t stream, std::uint64_t index);

std::size_t samples_for(double seconds, double sample_rate_hz);

// White Gaussian noise at snr_db relative to the mean power of `samples`.
// Chunk c of `chunk` samples draws from a generator seeded with seeds[c].
void add_noise(std::vector<double>& samples, double snr_db, const std::vector<std::uint64_t>& seeds,
               std::size_t chunk);

}  // namespace monoloc::harness
