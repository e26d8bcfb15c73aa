// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Experiment orchestration: scenario configuration, robot trajectories,
// streaming of simulated audio windows, and the estimator -> EKF pipeline.
//
// Two frames are used. Room coordinates span [0, L] x [0, W] with the floor
// at z = 0. The global (localization) frame is the robot's starting frame;
// its origin sits at `global_origin` in room coordinates and its axes are
// parallel to the room's.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "monoloc/acoustics.hpp"
#include "monoloc/estimators.hpp"
#include "monoloc/localization.hpp"

namespace monoloc::harness {

// ---- trajectories ---------------------------------------------------------

struct CircleSpec {
  Point2 center;
  double radius_m = 1.0;
  double angular_speed_rad_s = 0.0;  // positive is counter-clockwise
  double start_angle_rad = 0.0;      // polar angle of the start point
};

struct WaypointSpec {
  std::vector<Point2> points;
  double speed_mps = 0.1;
};

struct TrajectorySpec {
  std::variant<CircleSpec, WaypointSpec> path;
  double sample_period_s = 0.05;

  void validate() const;
};

struct TimedPose {
  double time_s = 0.0;
  localization::RobotPose pose;
};

// Exact pose at time t; heading is tangent to the path.
localization::RobotPose pose_at(const TrajectorySpec& spec, double t);

// Poses at t = 0, T_s, 2 T_s, ... up to and including duration_s (within
// floating-point tolerance).
std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec, double duration_s);

// Piecewise-linear interpolation of sampled poses (shortest-arc heading).
localization::RobotPose interpolate_pose(const std::vector<TimedPose>& poses, double t);

// ---- scenario -------------------------------------------------------------

inline constexpr double kMinWallClearance = 0.1;

struct CalibrationEntry {
  Point2 source;  // global frame
  Point2 mic;     // global frame
};

struct ScenarioConfig {
  std::string name = "scenario";
  acoustics::RoomSpec room;
  int rir_max_order = acoustics::kAllOrders;
  Point2 global_origin{2.0, 1.2};
  Point2 source{2.0, 2.5};
  double source_height_m = 1.2;
  localization::MicMount mic_mount;
  double mic_height_m = 1.2;
  TrajectorySpec trajectory;
  estimators::EstimatorKind estimator = estimators::OracleKind{};
  std::vector<CalibrationEntry> calibration;
  int calibration_windows = 10;  // recordings per calibration entry
  acoustics::ChirpSpec chirp;
  double segment_publish_s = 0.1;
  double segment_process_s = 0.2;
  localization::SourceBelief ekf_init;
  std::optional<double> innovation_gate;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  double duration_s = 60.0;

  // Room 5.9 x 6.9 x 2.9 m with RT60 0.6 s, source (2, 2.5), counter-clockwise
  // circle of radius 1.5 m starting at the global origin heading +x, one
  // revolution per 60 s, EKF init (1, 1) with identity covariance, oracle
  // estimator with sigma 0.1 m.
  static ScenarioConfig defaults();

  // Throws InvalidInput describing the first violated constraint.
  void validate() const;

  Point3 to_room(const Point2& global, double height) const {
    return {global.x + global_origin.x, global.y + global_origin.y, height};
  }

  // Relative paths (fanet weights) are resolved against base_dir.
  static ScenarioConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;
  static ScenarioConfig load(const std::filesystem::path& path);
};

// ---- streaming ------------------------------------------------------------

struct SegmentCounts {
  std::size_t published = 0;
  std::size_t windows = 0;
  std::size_t segments_per_window = 0;
};

SegmentCounts segment_counts(const ScenarioConfig& scenario);

struct AudioWindow {
  std::size_t index = 0;
  double timestamp_s = 0.0;   // end of the window
  double midpoint_s = 0.0;
  localization::RobotPose pose;  // exact pose at the midpoint
  Point2 mic;                    // microphone, global frame, exact
  std::vector<double> samples;
};

// Renders the chirp heard at `mic` (global frame) over samples
// [start, start + length) of the free-running source, in steady state.
std::vector<double> render_window(const ScenarioConfig& scenario, const Point2& source, const Point2& mic,
                                  std::int64_t start_sample, std::size_t length);

// Calls `sink` once per processing window, in time order. Windows are the
// most recent segment_process_s of audio after each published segment, from
// the first one that is full.
// With render_audio false the samples are left empty (oracle runs).
void stream_segments(const ScenarioConfig& scenario, const std::function<void(const AudioWindow&)>& sink,
                     bool render_audio = true);

// ---- running --------------------------------------------------------------

struct StepRecord {
  double time_s = 0.0;
  localization::RobotPose pose;
  Point2 mic;            // exact microphone position
  Point2 mic_reported;   // position given to the filter (sampled trajectory)
  std::optional<estimators::DistanceMeasurement> measurement;
  std::string failure;   // estimator error message when measurement is empty
  localization::FilterStep filter;
  double error_m = 0.0;  // |belief mean - source| after this step
};

struct RunResult {
  std::vector<StepRecord> steps;
  double initial_error_m = 0.0;
  double final_error_m = 0.0;
  double mae_last_quarter_m = 0.0;
  std::size_t failed_segments = 0;
  std::optional<estimators::DrrCalibration> calibration;

  void write_trace(std::ostream& out) const;
  std::string trace_csv() const;
};

// Fits a DRR calibration from the scenario's calibration entries, recording
// calibration_windows consecutive windows of segment_process_s at each.
estimators::DrrCalibration calibrate(const ScenarioConfig& scenario);

nlohmann::json drr_calibration_to_json(const estimators::DrrCalibration& calibration);

RunResult run_scenario(const ScenarioConfig& scenario);

// ---- sweeps ---------------------------------------------------------------

struct SweepSpec {
  std::vector<ScenarioConfig> scenarios;
  std::vector<std::uint64_t> seeds;           // empty: each scenario's own seed
  std::vector<double> segment_process_s;      // empty: each scenario's own
  std::filesystem::path trace_dir;            // empty: no per-run traces
  int threads = 0;                            // 0: hardware concurrency

  static SweepSpec from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static SweepSpec load(const std::filesystem::path& path);
};

struct SweepRow {
  std::string scenario;
  std::uint64_t seed = 0;
  double segment_process_s = 0.0;
  bool ok = false;
  std::string message;
  std::size_t steps = 0;
  std::size_t failed_segments = 0;
  double initial_error_m = 0.0;
  double final_error_m = 0.0;
  double mae_last_quarter_m = 0.0;
  std::string trace_file;
};

struct SweepReport {
  std::vector<SweepRow> rows;

  void write_csv(std::ostream& out) const;
};

// Runs every (scenario, seed, segment length) combination. A failing run is
// recorded in its row and the sweep continues. Row order is deterministic.
SweepReport sweep(const SweepSpec& spec);

}  // namespace monoloc::harness
