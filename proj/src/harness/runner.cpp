// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <sstream>

#include "monoloc/errors.hpp"
#include "monoloc/harness.hpp"
#include "stream_internal.hpp"

namespace monoloc::harness {
namespace {

estimators::DrrOptions drr_options(const ScenarioConfig& s) {
  estimators::DrrOptions o;
  o.chirp = s.chirp;
  o.sample_rate_hz = s.room.sample_rate_hz;
  return o;
}

double true_distance(const ScenarioConfig& s, const Point2& mic) {
  return distance(s.to_room(s.source, s.source_height_m), s.to_room(mic, s.mic_height_m));
}

}  // namespace

void RunResult::write_trace(std::ostream& out) const {
  localization::write_trace_header(out);
  for (const auto& s : steps) localization::write_trace_row(out, s.filter);
}

std::string RunResult::trace_csv() const {
  std::ostringstream out;
  write_trace(out);
  return out.str();
}

estimators::DrrCalibration calibrate(const ScenarioConfig& scenario) {
  scenario.validate();
  const double fs = scenario.room.sample_rate_hz;
  const std::size_t publish = samples_for(scenario.segment_publish_s, fs);
  const std::size_t length = samples_for(scenario.segment_process_s, fs);
  std::vector<estimators::LabeledSegment> segments;
  for (std::size_t i = 0; i < scenario.calibration.size(); ++i) {
    const auto& c = scenario.calibration[i];
    const double d = distance(scenario.to_room(c.source, scenario.source_height_m),
                              scenario.to_room(c.mic, scenario.mic_height_m));
    // The response is static, so one long render is sliced into windows.
    const auto windows = static_cast<std::size_t>(scenario.calibration_windows);
    const auto audio = render_window(scenario, c.source, c.mic, 0, windows * length);
    for (std::size_t k = 0; k < windows; ++k) {
      estimators::LabeledSegment seg;
      seg.samples.assign(audio.begin() + static_cast<std::ptrdiff_t>(k * length),
                         audio.begin() + static_cast<std::ptrdiff_t>((k + 1) * length));
      if (scenario.snr_db) {
        std::vector<std::uint64_t> seeds;
        for (std::size_t p = 0; p * publish < length; ++p) {
          seeds.push_back(stream_seed(scenario.seed, kCalibrationStream, (i << 32) | (k << 16) | p));
        }
        add_noise(seg.samples, *scenario.snr_db, seeds, publish);
      }
      seg.distance_m = d;
      segments.push_back(std::move(seg));
    }
  }
  return estimators::drr_calibrate(segments, drr_options(scenario));
}

RunResult run_scenario(const ScenarioConfig& scenario) {
  scenario.validate();
  RunResult result;

  // Measurement back end.
  std::function<estimators::DistanceMeasurement(const AudioWindow&)> measure;
  bool needs_audio = true;
  std::mt19937_64 oracle_rng(stream_seed(scenario.seed, kOracleStream, 0));
  std::optional<estimators::FanetEstimator> fanet;
  if (const auto* o = std::get_if<estimators::OracleKind>(&scenario.estimator)) {
    needs_audio = false;
    const double sigma = o->sigma_m;
    measure = [&, sigma](const AudioWindow& w) {
      return estimators::oracle_estimate(true_distance(scenario, w.mic), sigma, oracle_rng);
    };
  } else if (const auto* d = std::get_if<estimators::DrrKind>(&scenario.estimator)) {
    result.calibration = d->calibration ? *d->calibration : calibrate(scenario);
    const auto options = drr_options(scenario);
    measure = [&result, options](const AudioWindow& w) {
      return estimators::drr_estimate(w.samples, *result.calibration, options);
    };
  } else {
    const auto& f = std::get<estimators::FanetKind>(scenario.estimator);
    fanet.emplace(fanet::Model(fanet::WeightContainer::load(f.weights_path)), f.variance_m2);
    measure = [&fanet](const AudioWindow& w) { return estimators::fanet_estimate(w.samples, *fanet); };
  }

  const auto poses = generate_trajectory(scenario.trajectory, scenario.duration_s);
  const Eigen::Vector2d truth(scenario.source.x, scenario.source.y);
  localization::UpdateOptions update_options;
  update_options.innovation_gate = scenario.innovation_gate;
  localization::SourceBelief belief = scenario.ekf_init;
  result.initial_error_m = (belief.mean - truth).norm();

  stream_segments(
      scenario,
      [&](const AudioWindow& w) {
        StepRecord rec;
        rec.time_s = w.timestamp_s;
        rec.pose = w.pose;
        rec.mic = w.mic;
        rec.mic_reported = localization::mic_global(interpolate_pose(poses, w.midpoint_s), scenario.mic_mount);
        try {
          auto m = measure(w);
          m.timestamp_s = w.timestamp_s;
          m.segment_len_s = scenario.segment_process_s;
          rec.measurement = m;
        } catch (const std::exception& e) {
          rec.failure = e.what();
          ++result.failed_segments;
        }
        rec.filter.timestamp_s = w.timestamp_s;
        if (rec.measurement) {
          const auto r = localization::update(
              localization::predict(belief), rec.mic_reported,
              {w.timestamp_s, rec.measurement->distance_m, rec.measurement->variance_m2}, update_options);
          belief = r.belief;
          rec.filter.innovation = r.innovation;
          rec.filter.accepted = r.status == localization::UpdateStatus::kAccepted;
        }
        rec.filter.belief = belief;
        rec.error_m = (belief.mean - truth).norm();
        result.steps.push_back(std::move(rec));
      },
      needs_audio);

  result.final_error_m = result.steps.empty() ? result.initial_error_m : result.steps.back().error_m;
  if (!result.steps.empty()) {
    const std::size_t first = result.steps.size() * 3 / 4;
    double sum = 0.0;
    for (std::size_t i = first; i < result.steps.size(); ++i) sum += result.steps[i].error_m;
    result.mae_last_quarter_m = sum / static_cast<double>(result.steps.size() - first);
  }
  return result;
}

}  // namespace monoloc::harness
