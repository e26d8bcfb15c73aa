// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "monoloc/errors.hpp"
#include "monoloc/harness.hpp"

namespace monoloc::harness {

using nlohmann::json;

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig s;
  s.name = "default";
  s.room = acoustics::RoomSpec::with_target_rt60(5.9, 6.9, 2.9, 0.6);
  s.trajectory.path = CircleSpec{{0.0, 1.5}, 1.5, 2.0 * std::numbers::pi / 60.0, -std::numbers::pi / 2};
  s.trajectory.sample_period_s = 0.05;
  s.ekf_init.mean = {1.0, 1.0};
  s.ekf_init.covariance = Eigen::Matrix2d::Identity();
  s.calibration = {{{1.0, 1.0}, {0.0, 0.0}},
                   {{-1.0, 2.0}, {0.0, 0.0}},
                   {{2.0, 3.5}, {0.0, 0.0}},
                   {{0.0, 4.5}, {0.0, 0.0}},
                   {{3.0, 1.5}, {0.0, 0.0}}};
  return s;
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidInput("scenario: " + message);
}

bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double wall_clearance(const acoustics::RoomSpec& room, const Point3& p) {
  return std::min({p.x, room.length_m - p.x, p.y, room.width_m - p.y});
}

bool is_multiple(double value, double unit) {
  const double ratio = value / unit;
  return std::abs(ratio - std::round(ratio)) < 1e-6;
}

}  // namespace

void ScenarioConfig::validate() const {
  room.validate();
  require(finite(global_origin) && finite(source) && finite(mic_mount.offset), "positions must be finite");
  require(duration_s > 0.0 && std::isfinite(duration_s), "duration_s must be positive");
  require(segment_publish_s > 0.0, "segment_publish_s must be positive");
  require(segment_process_s >= segment_publish_s - 1e-12, "segment_process_s must be >= segment_publish_s");
  require(is_multiple(segment_process_s, segment_publish_s),
          "segment_process_s must be an integer multiple of segment_publish_s");
  require(is_multiple(segment_publish_s * room.sample_rate_hz, 1.0),
          "segment_publish_s must be a whole number of samples");
  chirp.validate(room.sample_rate_hz);
  require(source_height_m > 0.0 && source_height_m < room.height_m, "source height outside the room");
  require(mic_height_m > 0.0 && mic_height_m < room.height_m, "microphone height outside the room");
  require(room.contains(to_room(source, source_height_m)), "source outside the room");
  require(ekf_init.is_valid(), "ekf_init covariance must be symmetric positive-definite");
  if (innovation_gate) require(*innovation_gate > 0.0, "innovation_gate must be positive");

  trajectory.validate();
  for (const auto& tp : generate_trajectory(trajectory, duration_s)) {
    const Point2 mic = localization::mic_global(tp.pose, mic_mount);
    for (const Point2& p : {tp.pose.position, mic}) {
      if (wall_clearance(room, to_room(p, mic_height_m)) < kMinWallClearance) {
        std::ostringstream msg;
        msg << "trajectory leaves the room (closer than " << kMinWallClearance << " m to a wall at t = "
            << tp.time_s << " s)";
        require(false, msg.str());
      }
    }
  }
  for (const auto& c : calibration) {
    require(room.contains(to_room(c.source, source_height_m)) && room.contains(to_room(c.mic, mic_height_m)),
            "calibration position outside the room");
  }
  require(calibration_windows >= 1, "calibration_windows must be >= 1");
  if (const auto* o = std::get_if<estimators::OracleKind>(&estimator)) {
    require(o->sigma_m >= 0.0 && std::isfinite(o->sigma_m), "oracle sigma_m must be >= 0");
  } else if (const auto* d = std::get_if<estimators::DrrKind>(&estimator)) {
    require(d->calibration.has_value() || calibration.size() >= 2,
            "drr estimator needs a calibration or at least two calibration entries");
  } else {
    const auto& f = std::get<estimators::FanetKind>(estimator);
    require(!f.weights_path.empty(), "fanet estimator needs a weights path");
    if (f.variance_m2) require(*f.variance_m2 > 0.0, "fanet variance_m2 must be positive");
  }
}

// ---- JSON -----------------------------------------------------------------

namespace {

Point2 point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput("scenario: expected a point [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

acoustics::RoomSpec room_from_json(const json& j) {
  const double l = j.at("length_m").get<double>();
  const double w = j.at("width_m").get<double>();
  const double h = j.at("height_m").get<double>();
  acoustics::RoomSpec room;
  if (j.contains("absorption")) {
    const auto& a = j.at("absorption");
    if (a.is_number()) {
      room = acoustics::RoomSpec::with_absorption(l, w, h, a.get<double>());
    } else {
      room = acoustics::RoomSpec::with_absorption(l, w, h, 0.5);
      if (!a.is_array() || a.size() != 6) throw InvalidInput("scenario: absorption must be a number or 6 values");
      for (std::size_t i = 0; i < 6; ++i) room.absorption[i] = a.at(i).get<double>();
    }
    if (j.contains("target_rt60_s")) room.target_rt60_s = j.at("target_rt60_s").get<double>();
  } else if (j.contains("target_rt60_s")) {
    room = acoustics::RoomSpec::with_target_rt60(l, w, h, j.at("target_rt60_s").get<double>());
  } else {
    throw InvalidInput("scenario: room needs absorption or target_rt60_s");
  }
  room.speed_of_sound_mps = j.value("speed_of_sound_mps", room.speed_of_sound_mps);
  room.sample_rate_hz = j.value("sample_rate_hz", room.sample_rate_hz);
  return room;
}

json room_to_json(const acoustics::RoomSpec& room) {
  json j = {{"length_m", room.length_m},
            {"width_m", room.width_m},
            {"height_m", room.height_m},
            {"absorption", room.absorption},
            {"speed_of_sound_mps", room.speed_of_sound_mps},
            {"sample_rate_hz", room.sample_rate_hz}};
  if (room.target_rt60_s) j["target_rt60_s"] = *room.target_rt60_s;
  return j;
}

TrajectorySpec trajectory_from_json(const json& j) {
  TrajectorySpec t;
  t.sample_period_s = j.value("sample_period_s", t.sample_period_s);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") {
    CircleSpec c;
    c.center = point(j.at("center"));
    c.radius_m = j.at("radius_m").get<double>();
    c.angular_speed_rad_s = j.at("angular_speed_rad_s").get<double>();
    c.start_angle_rad = j.value("start_angle_rad", 0.0);
    t.path = c;
  } else if (kind == "waypoints") {
    WaypointSpec w;
    for (const auto& p : j.at("points")) w.points.push_back(point(p));
    w.speed_mps = j.at("speed_mps").get<double>();
    t.path = w;
  } else {
    throw InvalidInput("scenario: unknown trajectory kind '" + kind + "'");
  }
  return t;
}

json trajectory_to_json(const TrajectorySpec& t) {
  json j;
  if (const auto* c = std::get_if<CircleSpec>(&t.path)) {
    j = {{"kind", "circle"},
         {"center", point_json(c->center)},
         {"radius_m", c->radius_m},
         {"angular_speed_rad_s", c->angular_speed_rad_s},
         {"start_angle_rad", c->start_angle_rad}};
  } else {
    const auto& w = std::get<WaypointSpec>(t.path);
    json points = json::array();
    for (const auto& p : w.points) points.push_back(point_json(p));
    j = {{"kind", "waypoints"}, {"points", points}, {"speed_mps", w.speed_mps}};
  }
  j["sample_period_s"] = t.sample_period_s;
  return j;
}

estimators::DrrCalibration drr_calibration_from_json(const json& j) {
  estimators::DrrCalibration c;
  c.intercept = j.at("intercept").get<double>();
  c.slope = j.at("slope").get<double>();
  c.residual_std_log = j.value("residual_std_log", 0.0);
  c.min_std_m = j.value("min_std_m", c.min_std_m);
  c.usable = std::isfinite(c.slope) && c.slope != 0.0;
  return c;
}

}  // namespace

json drr_calibration_to_json(const estimators::DrrCalibration& c) {
  return {{"intercept", c.intercept},
          {"slope", c.slope},
          {"residual_std_log", c.residual_std_log},
          {"min_std_m", c.min_std_m},
          {"usable", c.usable}};
}

namespace {

estimators::EstimatorKind estimator_from_json(const json& j, const std::filesystem::path& base_dir) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "oracle") return estimators::OracleKind{j.value("sigma_m", 0.1)};
  if (kind == "drr") {
    estimators::DrrKind d;
    if (j.contains("calibration") && !j.at("calibration").is_null()) {
      d.calibration = drr_calibration_from_json(j.at("calibration"));
    }
    return d;
  }
  if (kind == "fanet") {
    estimators::FanetKind f;
    std::filesystem::path p = j.at("weights").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    f.weights_path = p.string();
    if (j.contains("variance_m2") && !j.at("variance_m2").is_null()) f.variance_m2 = j.at("variance_m2").get<double>();
    return f;
  }
  throw InvalidInput("scenario: unknown estimator kind '" + kind + "'");
}

json estimator_to_json(const estimators::EstimatorKind& e) {
  if (const auto* o = std::get_if<estimators::OracleKind>(&e)) return {{"kind", "oracle"}, {"sigma_m", o->sigma_m}};
  if (const auto* d = std::get_if<estimators::DrrKind>(&e)) {
    json j = {{"kind", "drr"}};
    if (d->calibration) j["calibration"] = drr_calibration_to_json(*d->calibration);
    return j;
  }
  const auto& f = std::get<estimators::FanetKind>(e);
  json j = {{"kind", "fanet"}, {"weights", f.weights_path}};
  if (f.variance_m2) j["variance_m2"] = *f.variance_m2;
  return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig s = defaults();
  try {
    s.name = j.value("name", s.name);
    if (j.contains("room")) s.room = room_from_json(j.at("room"));
    s.rir_max_order = j.value("rir_max_order", s.rir_max_order);
    if (j.contains("global_origin")) s.global_origin = point(j.at("global_origin"));
    if (j.contains("source")) {
      const auto& src = j.at("source");
      s.source = point(src.at("position"));
      s.source_height_m = src.value("height_m", s.source_height_m);
    }
    if (j.contains("mic")) {
      const auto& mic = j.at("mic");
      if (mic.contains("mount")) s.mic_mount.offset = point(mic.at("mount"));
      s.mic_height_m = mic.value("height_m", s.mic_height_m);
    }
    if (j.contains("trajectory")) s.trajectory = trajectory_from_json(j.at("trajectory"));
    if (j.contains("estimator")) s.estimator = estimator_from_json(j.at("estimator"), base_dir);
    if (j.contains("calibration")) {
      s.calibration.clear();
      for (const auto& c : j.at("calibration")) s.calibration.push_back({point(c.at("source")), point(c.at("mic"))});
    }
    s.calibration_windows = j.value("calibration_windows", s.calibration_windows);
    if (j.contains("chirp")) {
      const auto& c = j.at("chirp");
      s.chirp.f_start_hz = c.value("f_start_hz", s.chirp.f_start_hz);
      s.chirp.f_end_hz = c.value("f_end_hz", s.chirp.f_end_hz);
      s.chirp.period_s = c.value("period_s", s.chirp.period_s);
      s.chirp.amplitude = c.value("amplitude", s.chirp.amplitude);
    }
    s.segment_publish_s = j.value("segment_publish_s", s.segment_publish_s);
    s.segment_process_s = j.value("segment_process_s", s.segment_process_s);
    if (j.contains("ekf_init")) {
      const auto& e = j.at("ekf_init");
      const Point2 m = point(e.at("mean"));
      s.ekf_init.mean = {m.x, m.y};
      if (e.contains("covariance")) {
        const auto& p = e.at("covariance");
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) s.ekf_init.covariance(r, c) = p.at(r).at(c).get<double>();
        }
      }
    }
    if (j.contains("innovation_gate") && !j.at("innovation_gate").is_null()) {
      s.innovation_gate = j.at("innovation_gate").get<double>();
    }
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) s.snr_db = j.at("snr_db").get<double>();
    s.seed = j.value("seed", s.seed);
    s.duration_s = j.value("duration_s", s.duration_s);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

json ScenarioConfig::to_json() const {
  json calib = json::array();
  for (const auto& c : calibration) calib.push_back({{"source", point_json(c.source)}, {"mic", point_json(c.mic)}});
  const auto& p = ekf_init.covariance;
  return {{"name", name},
          {"room", room_to_json(room)},
          {"rir_max_order", rir_max_order},
          {"global_origin", point_json(global_origin)},
          {"source", {{"position", point_json(source)}, {"height_m", source_height_m}}},
          {"mic", {{"mount", point_json(mic_mount.offset)}, {"height_m", mic_height_m}}},
          {"trajectory", trajectory_to_json(trajectory)},
          {"estimator", estimator_to_json(estimator)},
          {"calibration", calib},
          {"calibration_windows", calibration_windows},
          {"chirp",
           {{"f_start_hz", chirp.f_start_hz},
            {"f_end_hz", chirp.f_end_hz},
            {"period_s", chirp.period_s},
            {"amplitude", chirp.amplitude}}},
          {"segment_publish_s", segment_publish_s},
          {"segment_process_s", segment_process_s},
          {"ekf_init",
           {{"mean", json::array({ekf_init.mean.x(), ekf_init.mean.y()})},
            {"covariance", json::array({json::array({p(0, 0), p(0, 1)}), json::array({p(1, 0), p(1, 1)})})}}},
          {"innovation_gate", innovation_gate ? json(*innovation_gate) : json(nullptr)},
          {"snr_db", snr_db ? json(*snr_db) : json(nullptr)},
          {"seed", seed},
          {"duration_s", duration_s}};
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("scenario " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

}  // namespace monoloc::harness
