// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "monoloc/fanet.hpp"
#include "monoloc/features.hpp"
#include "monoloc/harness.hpp"
#include "monoloc/model.hpp"
#include "monoloc/weights.hpp"
#include "support.hpp"
#include "trilateration.hpp"

using namespace monoloc;

namespace {

const std::filesystem::path kData = MONOLOC_TEST_DATA;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

Outcome parameter_budget() {
  const fanet::FaNetConfig cfg;
  const auto n = fanet::count_parameters(cfg);
  bool ok = n >= 41000 && n <= 45000;
  std::vector<fanet::WeightContainer> containers{fanet::random_weights(cfg, 1), fanet::random_weights(cfg, 2),
                                                 fanet::WeightContainer::load(kData / "parity_weights.fanw")};
  for (const auto& w : containers) ok = ok && w.parameter_element_count() == fanet::count_parameters(w.config);
  return {ok, fmt("count_parameters = %lld, in [41000, 45000], equals element count of %zu containers",
                  static_cast<long long>(n), containers.size())};
}

Outcome mac_accounting() {
  const auto macs = fanet::count_macs(fanet::FaNetConfig{}, 22);
  return {macs >= 8'700'000 && macs <= 26'100'000,
          fmt("count_macs(T = 22) = %lld, bounds [8.7M, 26.1M]", static_cast<long long>(macs))};
}

Outcome ekf_oracle_equivalence() {
  const Eigen::Vector2d source(1.3, 2.1);
  const std::vector<Point2> mics{{0.0, 0.0}, {2.0, 0.0}, {0.5, 1.5}, {-1.0, 1.0}};
  std::vector<localization::FilterInput> stream;
  for (int k = 0; k < 200000; ++k) {
    const Point2 m = mics[k % mics.size()];
    stream.push_back({m, {1e-3 * k, (source - Eigen::Vector2d(m.x, m.y)).norm(), estimators::kOracleVarianceFloor}});
  }
  localization::SourceBelief init;
  init.mean = {1.0, 1.0};
  init.covariance = Eigen::Matrix2d::Identity();
  const auto steps = localization::run_filter(init, stream);
  const auto reference =
      testing::trilaterate(std::vector<localization::FilterInput>(stream.begin(), stream.begin() + mics.size()));
  const double gap = (steps.back().belief.mean - reference).norm();
  return {gap < 1e-6, fmt("|EKF - NLS| = %.3g m after %zu noiseless updates from 4 mics, bound 1e-6", gap, steps.size())};
}

Outcome ekf_convergence() {
  std::vector<double> errors;
  std::size_t updates = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto s = harness::ScenarioConfig::defaults();
    s.estimator = estimators::OracleKind{0.1};
    s.duration_s = 20.15;  // 201 published segments, 200 windows
    s.seed = seed;
    const auto r = harness::run_scenario(s);
    updates = r.steps.size();
    errors.push_back(r.final_error_m);
  }
  const double med = testing::median(errors);
  return {updates == 200 && med < 0.1,
          fmt("median final error %.4f m over 20 seeds, %zu updates each, bound 0.1", med, updates)};
}

Outcome ekf_worked_example() {
  localization::SourceBelief b;
  b.mean = {1.0, 1.0};
  b.covariance = Eigen::Matrix2d::Identity();
  const double w = 0.01, z = std::sqrt(2.0) + 0.1;
  const auto r = localization::update(b, {0.0, 0.0}, {0.0, z, w});
  const double u = 1.0 / std::sqrt(2.0), s = 1.0 + w, nu = z - std::sqrt(2.0);
  const double err = std::max({std::abs(r.belief.mean.x() - (1.0 + u * nu / s)),
                               std::abs(r.belief.mean.y() - (1.0 + u * nu / s)),
                               std::abs(r.belief.covariance(0, 0) - (1.0 - u * u / s)),
                               std::abs(r.belief.covariance(1, 1) - (1.0 - u * u / s)),
                               std::abs(r.belief.covariance(0, 1) + u * u / s),
                               std::abs(r.belief.covariance(1, 0) + u * u / s)});
  return {err < 1e-9, fmt("max deviation from scalar oracle %.3g, bound 1e-9", err)};
}

Outcome acoustic_physics() {
  const auto room = acoustics::RoomSpec::with_target_rt60(5.9, 6.9, 2.9, 0.6);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> ux(0.2, 5.7), uy(0.2, 6.7), uz(0.2, 2.7);
  int exact = 0;
  for (int i = 0; i < 50; ++i) {
    const Point3 src{ux(rng), uy(rng), uz(rng)}, mic{ux(rng), uy(rng), uz(rng)};
    const auto rir = acoustics::generate_rir(room, src, mic, {1, 0.05});
    const auto expected = static_cast<std::size_t>(
        std::llround(distance(src, mic) * room.sample_rate_hz / room.speed_of_sound_mps));
    exact += rir.direct_path_index == expected;
  }
  const double rt60 = acoustics::compute_rt60(acoustics::generate_rir(room, {4.0, 3.7, 1.2}, {2.0, 2.0, 1.2}));
  const Point3 src{1.0, 3.5, 1.2};
  std::vector<double> dist, drr;
  for (int i = 0; i < 24; ++i) {
    const Point3 mic{1.3 + 0.18 * i, 3.2 + 0.05 * (i % 3), 1.2};
    dist.push_back(distance(src, mic));
    drr.push_back(acoustics::compute_drr(acoustics::generate_rir(room, src, mic)));
  }
  const double rho = testing::spearman(dist, drr);
  const bool ok = exact == 50 && std::abs(rt60 - 0.6) <= 0.12 && rho <= -0.9;
  return {ok, fmt("(a) %d/50 direct indices exact; (b) RT60 %.3f s vs 0.6 +/- 20%%; (c) Spearman %.3f over %zu "
                  "positions, bound -0.9",
                  exact, rt60, rho, dist.size())};
}

Outcome feature_identities() {
  const features::StftSpec spec;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> len(512, 12800);
  std::normal_distribution<double> g;
  double worst_unit = 0.0;
  int bad_t = 0, bad_roundtrip = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> seg(len(rng));
    for (double& v : seg) v = g(rng);
    const auto x = features::stft_features(seg, spec);
    const int expected_t = 1 + static_cast<int>((seg.size() - 512) / 128);
    bad_t += x.frames != expected_t;
    for (int f = 0; f < x.freq_bins; ++f) {
      for (int t = 0; t < x.frames; ++t) {
        const double s = x.at(features::kSin, f, t), c = x.at(features::kCos, f, t);
        worst_unit = std::max(worst_unit, std::abs(s * s + c * c - 1.0));
      }
    }
    const int n = 1 << (i % 9);  // 1 .. 256
    bad_roundtrip += features::from_subbands(features::to_subbands(x, n)).data != x.data;
  }
  return {worst_unit <= 1e-6 && bad_t == 0 && bad_roundtrip == 0,
          fmt("100 segments: max |sin^2 + cos^2 - 1| = %.2g (bound 1e-6), %d frame-count mismatches, %d inexact "
              "subband round trips",
              worst_unit, bad_t, bad_roundtrip)};
}

features::SubbandTensor random_input(const fanet::FaNetConfig& cfg, int frames, std::uint64_t seed) {
  features::SubbandTensor x;
  x.subbands = cfg.subbands;
  x.rows = cfg.rows();
  x.frames = frames;
  x.data.resize(static_cast<std::size_t>(x.channels()) * x.rows * frames);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> g(0.0f, 3.0f);
  for (float& v : x.data) v = g(rng);
  return x;
}

Outcome fanet_structure() {
  const fanet::FaNetConfig cfg;
  bool lengths = true, nonneg = true;
  double worst_row = 0.0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto model = fanet::Model::random(cfg, seed);
    for (int t : {1, 22, 47}) {
      const auto out = model.forward(random_input(cfg, t, seed * 97 + t), {},
                                     [&](int, int, std::span<const double> a, int frames) {
                                       for (int r = 0; r < frames; ++r) {
                                         double sum = 0.0;
                                         for (int c = 0; c < frames; ++c) sum += a[r * frames + c];
                                         worst_row = std::max(worst_row, std::abs(sum - 1.0));
                                       }
                                     });
      lengths = lengths && out.values.size() == static_cast<std::size_t>(t);
      for (float v : out.values) nonneg = nonneg && v >= 0.0f;
    }
  }
  auto w = fanet::random_weights(cfg, 13);
  for (auto& t : w.tensors) {
    if (t.role == fanet::TensorRole::kParameter &&
        (t.name.find(".filter.") != std::string::npos || t.name.find(".attn.") != std::string::npos)) {
      std::fill(t.data.begin(), t.data.end(), 0.0f);
    }
  }
  const fanet::Model zeroed(w);
  const int rows = cfg.rows(), frames = 22;
  std::vector<float> x(static_cast<std::size_t>(cfg.channels) * rows * frames);
  std::mt19937_64 rng(1);
  std::normal_distribution<float> g;
  for (float& v : x) v = g(rng);
  fanet::ForwardOptions bypass;
  bypass.bypass_channel_norm = true;
  bool identity = true;
  for (int b = 0; b < cfg.fa_blocks; ++b) identity = identity && zeroed.forward_block(b, x, rows, frames, bypass) == x;
  return {lengths && nonneg && worst_row <= 1e-6 && identity,
          fmt("output length == T for {1, 22, 47}: %s; outputs >= 0: %s; max |row sum - 1| = %.2g (bound 1e-6); "
              "zeroed-block identity exact: %s",
              lengths ? "yes" : "no", nonneg ? "yes" : "no", worst_row, identity ? "yes" : "no")};
}

harness::ScenarioConfig drr_scenario(Point2 source) {
  auto s = harness::ScenarioConfig::defaults();
  s.estimator = estimators::DrrKind{};
  s.source = source;
  return s;
}

Outcome drr_end_to_end() {
  const std::vector<std::pair<const char*, Point2>> locations{
      {"A", {2.0, 2.5}}, {"B", {2.5, 2.5}}, {"C", {1.5, 2.5}}, {"D", {2.0, 2.0}}};
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [label, source] : locations) {
    const auto r = harness::run_scenario(drr_scenario(source));
    const bool pass = r.final_error_m < r.initial_error_m / 5.0 && r.final_error_m < 1.0;
    ok = ok && pass;
    detail << label << " final " << fmt("%.3f", r.final_error_m) << " (initial " << fmt("%.3f", r.initial_error_m)
           << ")" << (pass ? "" : " FAILED") << "; ";
  }
  detail << "bounds: < initial/5 and < 1.0 m";
  return {ok, detail.str()};
}

Outcome segment_length_trend() {
  const std::vector<double> lengths{0.2, 0.4, 0.6, 0.8};
  std::vector<double> mae;
  for (double len : lengths) {
    auto s = drr_scenario({2.0, 2.5});
    s.segment_process_s = len;
    mae.push_back(harness::run_scenario(s).mae_last_quarter_m);
  }
  const double top = *std::max_element(mae.begin() + 1, mae.end());
  const double bottom = *std::min_element(mae.begin() + 1, mae.end());
  const bool ok = mae[1] <= mae[0] && top - bottom <= 0.1 * top;
  return {ok, fmt("MAE over last quarter (m): 0.2 s %.4f, 0.4 s %.4f, 0.6 s %.4f, 0.8 s %.4f; spread among >= 0.4 s "
                  "%.1f%% (bound 10%%)",
                  mae[0], mae[1], mae[2], mae[3], 100.0 * (top - bottom) / top)};
}

Outcome determinism() {
  auto oracle = harness::ScenarioConfig::defaults();
  oracle.seed = 11;
  auto drr = drr_scenario({2.0, 2.5});
  drr.duration_s = 10.0;
  drr.snr_db = 10.0;
  drr.seed = 11;
  bool ok = true;
  for (const auto* s : {&oracle, &drr}) ok = ok && harness::run_scenario(*s).trace_csv() == harness::run_scenario(*s).trace_csv();
  return {ok, "oracle and noisy DRR scenarios rerun with the same seed give byte-identical trace CSVs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"parameter budget", parameter_budget},
      {"MAC accounting", mac_accounting},
      {"EKF oracle equivalence", ekf_oracle_equivalence},
      {"EKF convergence under noise", ekf_convergence},
      {"EKF worked example", ekf_worked_example},
      {"acoustic physics", acoustic_physics},
      {"feature identities", feature_identities},
      {"FA-Net structural properties", fanet_structure},
      {"end-to-end with DRR estimator", drr_end_to_end},
      {"segment-length trend", segment_length_trend},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s [%2zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
