// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "monoloc/errors.hpp"
#include "monoloc/estimators.hpp"
#include "support.hpp"

using namespace monoloc;
using namespace monoloc::estimators;

namespace {

constexpr double kFs = 16000.0;
constexpr std::size_t kPeriod = 1600;

const acoustics::RoomSpec& room() {
  static const auto r = acoustics::RoomSpec::with_target_rt60(5.9, 6.9, 2.9, 0.6);
  return r;
}

// Steady-state recording of the free-running chirp: samples [start, start + n)
// of sum_j h[j] c[k - j], evaluated term by term.
std::vector<double> steady_state(const acoustics::RirSignal& rir, std::size_t start, std::size_t n) {
  const acoustics::ChirpSpec chirp;
  std::vector<double> c(kPeriod);
  for (std::size_t k = 0; k < kPeriod; ++k) c[k] = acoustics::chirp_sample(chirp, static_cast<std::int64_t>(k), kFs);
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = start + i;
    double acc = 0.0;
    for (std::size_t j = 0; j < rir.samples.size(); ++j) {
      if (rir.samples[j] == 0.0) continue;
      acc += rir.samples[j] * c[(k + kPeriod * 64 - j) % kPeriod];
    }
    y[i] = acc;
  }
  return y;
}

// DRR of the response folded onto one period, window centred on the largest tap.
double folded_drr(const acoustics::RirSignal& rir) {
  std::vector<double> f(kPeriod, 0.0);
  for (std::size_t j = 0; j < rir.samples.size(); ++j) f[j % kPeriod] += rir.samples[j];
  const auto peak = static_cast<std::ptrdiff_t>(
      std::max_element(f.begin(), f.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }) - f.begin());
  double direct = 0.0, total = 0.0;
  for (double v : f) total += v * v;
  for (std::ptrdiff_t k = -40; k <= 40; ++k) {
    const double v = f[static_cast<std::size_t>((peak + k + static_cast<std::ptrdiff_t>(kPeriod)) % kPeriod)];
    direct += v * v;
  }
  return 10.0 * std::log10(direct / (total - direct));
}

DrrOptions options() { return {}; }

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("sigma 0 returns the true distance with the variance floor") {
    std::mt19937_64 rng(1);
    const auto m = oracle_estimate(3.25, 0.0, rng);
    CHECK(m.distance_m == 3.25);
    CHECK(m.variance_m2 == kOracleVarianceFloor);
  }

  TEST_CASE("10k draws have the requested mean and spread") {
    std::mt19937_64 rng(2);
    std::vector<double> d;
    for (int i = 0; i < 10000; ++i) {
      const auto m = oracle_estimate(5.0, 0.1, rng);
      CHECK(m.variance_m2 == doctest::Approx(0.01));
      d.push_back(m.distance_m);
    }
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
    double sq = 0.0;
    for (double v : d) sq += (v - mean) * (v - mean);
    const double sd = std::sqrt(sq / (d.size() - 1));
    CHECK(std::abs(mean - 5.0) <= 0.01);
    CHECK(std::abs(sd - 0.1) <= 0.01);
  }

  TEST_CASE("negative draws clamp to zero") {
    std::mt19937_64 rng(3);
    int clamped = 0;
    for (int i = 0; i < 200; ++i) {
      const auto m = oracle_estimate(0.01, 1.0, rng);
      CHECK(m.distance_m >= 0.0);
      clamped += m.distance_m == 0.0;
    }
    CHECK(clamped > 50);
  }
}

TEST_SUITE("drr") {
  TEST_CASE("exact log-linear data is reproduced at the calibration points") {
    std::vector<DrrCalibrationPoint> pts;
    for (double d : {0.8, 1.3, 2.0, 2.9, 4.1}) pts.push_back({(std::log(d) - 0.4) / -0.2, d});
    const auto cal = fit_drr_calibration(pts);
    CHECK(cal.usable);
    CHECK(cal.slope == doctest::Approx(-0.2));
    CHECK(cal.intercept == doctest::Approx(0.4));
    CHECK(cal.residual_std_log < 1e-9);
    for (const auto& p : pts) CHECK(std::abs(cal.distance_for(p.drr_db) - p.distance_m) < 1e-6);
    // Variance floors at min_std_m.
    CHECK(cal.variance_for(2.0) == doctest::Approx(0.05 * 0.05));
  }

  TEST_CASE("estimates fall strictly as DRR rises") {
    std::vector<DrrCalibrationPoint> pts{{5.0, 1.0}, {0.0, 2.0}, {-4.0, 3.5}};
    const auto cal = fit_drr_calibration(pts);
    REQUIRE(cal.slope < 0.0);
    double prev = INFINITY;
    for (double drr = -20.0; drr <= 20.0; drr += 0.5) {
      const double d = cal.distance_for(drr);
      CHECK(d < prev);
      CHECK(d > 0.0);
      prev = d;
    }
  }

  TEST_CASE("degenerate calibration sets") {
    CHECK_THROWS_AS(fit_drr_calibration(std::vector<DrrCalibrationPoint>{{1.0, 2.0}, {3.0, 2.0}}), InvalidInput);
    CHECK_THROWS_AS(fit_drr_calibration(std::vector<DrrCalibrationPoint>{{1.0, 2.0}, {3.0, -1.0}}), InvalidInput);
    const auto flat = fit_drr_calibration(std::vector<DrrCalibrationPoint>{{1.0, 2.0}, {1.0, 3.0}});
    CHECK_FALSE(flat.usable);
    const std::vector<double> segment(3200, 0.1);
    CHECK_THROWS_AS(drr_estimate(segment, flat, options()), MeasurementError);
  }

  TEST_CASE("segment DRR matches the period-folded response") {
    for (const auto& [src, mic] : {std::pair(Point3{2.0, 2.5, 1.2}, Point3{3.5, 4.0, 1.2}),
                                   std::pair(Point3{1.0, 1.0, 1.5}, Point3{4.5, 5.5, 1.2})}) {
      const auto rir = acoustics::generate_rir(room(), src, mic);
      const auto seg = steady_state(rir, 12345, 3200);
      const double est = estimate_segment_drr(seg, options());
      CHECK(std::abs(est - folded_drr(rir)) < 0.5);
      CHECK(std::abs(est - acoustics::compute_drr(rir)) < 2.0);
    }
  }

  TEST_CASE("short and silent segments are unmeasurable") {
    CHECK_THROWS_AS(estimate_segment_drr(std::vector<double>(1599, 0.1), options()), MeasurementError);
    CHECK_THROWS_AS(estimate_segment_drr(std::vector<double>(3200, 0.0), options()), MeasurementError);
  }

  TEST_CASE("noise compensation keeps the estimate unbiased") {
    const auto rir = acoustics::generate_rir(room(), {2.0, 2.5, 1.2}, {3.5, 4.0, 1.2});
    const auto clean = steady_state(rir, 0, 3200);
    const double reference = estimate_segment_drr(clean, options());
    double power = 0.0;
    for (double v : clean) power += v * v / clean.size();
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, std::sqrt(power));  // 0 dB SNR
    double sum = 0.0;
    const int trials = 100;
    for (int i = 0; i < trials; ++i) {
      auto noisy = clean;
      for (double& v : noisy) v += g(rng);
      sum += estimate_segment_drr(noisy, options());
    }
    CHECK(std::abs(sum / trials - reference) < 0.3);
  }

  TEST_CASE("calibration on five positions beats the mean-distance baseline") {
    const Point3 source{2.0, 3.5, 1.2};
    std::vector<LabeledSegment> cal_set;
    for (const Point3 mic : {Point3{1.0, 1.0, 1.2}, Point3{4.5, 1.5, 1.2}, Point3{2.5, 4.5, 1.2},
                             Point3{5.0, 5.5, 1.2}, Point3{1.0, 6.0, 1.2}}) {
      const auto rir = acoustics::generate_rir(room(), source, mic);
      cal_set.push_back({steady_state(rir, 0, 3200), distance(source, mic)});
    }
    const auto cal = drr_calibrate(cal_set, options());
    CHECK(cal.usable);
    CHECK(cal.slope < 0.0);
    double mean_d = 0.0;
    for (const auto& s : cal_set) mean_d += s.distance_m / cal_set.size();

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(0.5, 5.4), uy(0.5, 6.4);
    double mae = 0.0, baseline = 0.0;
    const int held_out = 10;
    for (int i = 0; i < held_out; ++i) {
      Point3 mic{ux(rng), uy(rng), 1.2};
      while (distance(mic, source) < 0.5) mic = {ux(rng), uy(rng), 1.2};
      const auto rir = acoustics::generate_rir(room(), source, mic);
      const auto m = drr_estimate(steady_state(rir, 800, 3200), cal, options());
      CHECK(std::isfinite(m.distance_m));
      CHECK(m.distance_m >= 0.0);
      CHECK(m.variance_m2 > 0.0);
      mae += std::abs(m.distance_m - distance(mic, source)) / held_out;
      baseline += std::abs(mean_d - distance(mic, source)) / held_out;
    }
    const double half_diagonal = 0.5 * std::hypot(5.9, 6.9);
    CHECK(mae < half_diagonal);
    CHECK(mae < baseline);
  }

  TEST_CASE("repeated distances are averaged before the fit") {
    const auto rir_a = acoustics::generate_rir(room(), {2.0, 2.5, 1.2}, {3.0, 2.5, 1.2});
    const auto rir_b = acoustics::generate_rir(room(), {2.0, 2.5, 1.2}, {5.0, 5.5, 1.2});
    const auto a = steady_state(rir_a, 0, 1600), b = steady_state(rir_b, 0, 1600);
    const std::vector<LabeledSegment> once{{a, 1.0}, {b, 4.0}};
    const std::vector<LabeledSegment> twice{{a, 1.0}, {a, 1.0}, {b, 4.0}};
    const auto c1 = drr_calibrate(once, options());
    const auto c2 = drr_calibrate(twice, options());
    CHECK(c1.slope == doctest::Approx(c2.slope));
    CHECK(c1.intercept == doctest::Approx(c2.intercept));
  }
}

TEST_SUITE("fanet estimator") {
  TEST_CASE("variance defaults from the validation MAE") {
    auto w = fanet::random_weights(fanet::FaNetConfig{}, 1);
    const FanetEstimator plain{fanet::Model(w)};
    CHECK(plain.variance_m2 == doctest::Approx(std::pow(kDefaultValidationMae * kMaeToStd, 2)));
    w.metadata["validation_mae_m"] = 0.3;
    const FanetEstimator from_meta{fanet::Model(w)};
    CHECK(from_meta.variance_m2 == doctest::Approx(std::pow(0.3 * kMaeToStd, 2)));
    const FanetEstimator explicit_var{fanet::Model(w), 0.02};
    CHECK(explicit_var.variance_m2 == 0.02);
  }

  TEST_CASE("zero output layer yields a valid zero-distance measurement") {
    auto w = fanet::random_weights(fanet::FaNetConfig{}, 2);
    std::fill(w.at("head.weight").data.begin(), w.at("head.weight").data.end(), 0.0f);
    w.at("head.bias").data[0] = 0.0f;
    const FanetEstimator est{fanet::Model(w)};
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<double> seg(3200);
    for (double& v : seg) v = g(rng);
    const auto m = fanet_estimate(seg, est);
    CHECK(m.distance_m == 0.0);
    CHECK(m.variance_m2 > 0.0);
  }

  TEST_CASE("a 0.2 s segment is the mean of 22 frame outputs") {
    auto w = fanet::random_weights(fanet::FaNetConfig{}, 3);
    w.at("head.bias").data[0] = 2.0f;
    const FanetEstimator est{fanet::Model(w)};
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<double> seg(3200);
    for (double& v : seg) v = g(rng);
    const auto x = features::to_subbands(features::stft_features(seg), 16);
    CHECK(x.frames == 22);
    const auto frames = est.model.forward(x);
    CHECK(fanet_estimate(seg, est).distance_m == doctest::Approx(frames.mean()));
  }

  TEST_CASE("segments shorter than a frame are rejected") {
    const FanetEstimator est{fanet::Model::random(fanet::FaNetConfig{}, 4)};
    CHECK_THROWS_AS(fanet_estimate(std::vector<double>(400, 0.0), est), InvalidInput);
  }
}
