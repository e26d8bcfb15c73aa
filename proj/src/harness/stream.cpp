// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "monoloc/fft.hpp"
#include "monoloc/harness.hpp"
#include "stream_internal.hpp"

namespace monoloc::harness {

std::size_t samples_for(double seconds, double sample_rate_hz) {
  return static_cast<std::size_t>(std::llround(seconds * sample_rate_hz));
}

SegmentCounts segment_counts(const ScenarioConfig& scenario) {
  SegmentCounts c;
  c.published = static_cast<std::size_t>(std::floor(scenario.duration_s / scenario.segment_publish_s + 1e-9));
  c.segments_per_window =
      static_cast<std::size_t>(std::llround(scenario.segment_process_s / scenario.segment_publish_s));
  c.windows = c.published >= c.segments_per_window ? c.published - (c.segments_per_window - 1) : 0;
  return c;
}

std::vector<double> render_window(const ScenarioConfig& scenario, const Point2& source, const Point2& mic,
                                  std::int64_t start_sample, std::size_t length) {
  const auto rir = acoustics::generate_rir(scenario.room, scenario.to_room(source, scenario.source_height_m),
                                           scenario.to_room(mic, scenario.mic_height_m),
                                           {scenario.rir_max_order, 0.0});
  // Excitation starts early enough that every output sample sees the full
  // response (steady state of the free-running chirp).
  const std::size_t tail = rir.samples.size() - 1;
  std::vector<double> excitation(length + tail);
  const std::int64_t first = start_sample - static_cast<std::int64_t>(tail);
  for (std::size_t i = 0; i < excitation.size(); ++i) {
    excitation[i] = acoustics::chirp_sample(scenario.chirp, first + static_cast<std::int64_t>(i),
                                            scenario.room.sample_rate_hz);
  }
  const auto full = fft::convolve(excitation, rir.samples);
  return {full.begin() + static_cast<std::ptrdiff_t>(tail),
          full.begin() + static_cast<std::ptrdiff_t>(tail + length)};
}

void add_noise(std::vector<double>& samples, double snr_db, const std::vector<std::uint64_t>& seeds,
               std::size_t chunk) {
  double power = 0.0;
  for (double v : samples) power += v * v;
  power /= static_cast<double>(samples.size());
  const double sd = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    std::seed_seq seq{seeds[c] & 0xffffffffu, seeds[c] >> 32};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = c * chunk; i < std::min(samples.size(), (c + 1) * chunk); ++i) {
      samples[i] += sd * noise(rng);
    }
  }
}

std::uint64_t stream_seed(std::uint64_t scenario_seed, std::uint64_t stream, std::uint64_t index) {
  // splitmix64 over the combined key.
  std::uint64_t z = scenario_seed * 0x9e3779b97f4a7c15ull + stream * 0xbf58476d1ce4e5b9ull + index + 1;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void stream_segments(const ScenarioConfig& scenario, const std::function<void(const AudioWindow&)>& sink,
                     bool render_audio) {
  scenario.validate();
  const SegmentCounts counts = segment_counts(scenario);
  const double fs = scenario.room.sample_rate_hz;
  const std::size_t publish = samples_for(scenario.segment_publish_s, fs);
  const std::size_t window_len = publish * counts.segments_per_window;
  for (std::size_t w = 0; w < counts.windows; ++w) {
    const std::size_t last_segment = w + counts.segments_per_window - 1;
    const std::size_t end = (last_segment + 1) * publish;
    const std::size_t start = end - window_len;
    AudioWindow out;
    out.index = w;
    out.timestamp_s = static_cast<double>(end) / fs;
    out.midpoint_s = (static_cast<double>(start) + 0.5 * static_cast<double>(window_len)) / fs;
    out.pose = pose_at(scenario.trajectory, out.midpoint_s);
    out.mic = localization::mic_global(out.pose, scenario.mic_mount);
    if (render_audio) {
      out.samples = render_window(scenario, scenario.source, out.mic, static_cast<std::int64_t>(start), window_len);
      if (scenario.snr_db) {
        // One noise stream per published segment, so overlapping windows share
        // the noise of the segments they have in common.
        std::vector<std::uint64_t> seeds;
        for (std::size_t s = w; s <= last_segment; ++s) seeds.push_back(stream_seed(scenario.seed, kNoiseStream, s));
        add_noise(out.samples, *scenario.snr_db, seeds, publish);
      }
    }
    sink(out);
  }
}

}  // namespace monoloc::harness
