// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: scenario runs, sweeps, DRR calibration, and weight
// container inspection.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "monoloc/acoustics.hpp"
#include "monoloc/harness.hpp"
#include "monoloc/model.hpp"
#include "monoloc/parity.hpp"
#include "monoloc/tensor_io.hpp"
#include "monoloc/weights.hpp"

namespace fs = std::filesystem;
using monoloc::harness::ScenarioConfig;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

ScenarioConfig load_scenario(const std::string& path) {
  if (path == "default") return ScenarioConfig::defaults();
  return ScenarioConfig::load(path);
}

void write_plot_data(const fs::path& path, const monoloc::harness::RunResult& r, const ScenarioConfig& s) {
  std::ofstream out(path);
  out << "# time_s robot_x robot_y mic_x mic_y z_m est_x est_y error_m source_x source_y\n";
  char line[320];
  for (const auto& step : r.steps) {
    const double z = step.measurement ? step.measurement->distance_m : std::nan("");
    std::snprintf(line, sizeof(line), "%.3f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f\n", step.time_s,
                  step.pose.position.x, step.pose.position.y, step.mic.x, step.mic.y, z,
                  step.filter.belief.mean.x(), step.filter.belief.mean.y(), step.error_m, s.source.x, s.source.y);
    out << line;
  }
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
            std::optional<double> segment) {
  ScenarioConfig s = load_scenario(scenario_path);
  if (seed) s.seed = *seed;
  if (segment) s.segment_process_s = *segment;
  const auto r = monoloc::harness::run_scenario(s);
  std::printf("scenario %s seed %llu: %zu steps, %zu failed, initial error %.4f m, final error %.4f m, "
              "MAE (last 25%%) %.4f m\n",
              s.name.c_str(), static_cast<unsigned long long>(s.seed), r.steps.size(), r.failed_segments,
              r.initial_error_m, r.final_error_m, r.mae_last_quarter_m);
  if (!r.steps.empty()) {
    const auto& m = r.steps.back().filter.belief.mean;
    std::printf("final estimate (%.4f, %.4f), source (%.4f, %.4f)\n", m.x(), m.y(), s.source.x, s.source.y);
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    {
      std::ofstream trace(fs::path(out_dir) / "trace.csv", std::ios::binary);
      r.write_trace(trace);
    }
    write_plot_data(fs::path(out_dir) / "trajectory.dat", r, s);
    json summary = {{"scenario", s.to_json()},
                    {"steps", r.steps.size()},
                    {"failed_segments", r.failed_segments},
                    {"initial_error_m", r.initial_error_m},
                    {"final_error_m", r.final_error_m},
                    {"mae_last_quarter_m", r.mae_last_quarter_m}};
    if (r.calibration) summary["drr_calibration"] = monoloc::harness::drr_calibration_to_json(*r.calibration);
    std::ofstream(fs::path(out_dir) / "summary.json") << summary.dump(2) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& out) {
  const auto spec = monoloc::harness::SweepSpec::load(path);
  const auto report = monoloc::harness::sweep(spec);
  if (out.empty()) {
    report.write_csv(std::cout);
  } else {
    std::ofstream file(out, std::ios::binary);
    report.write_csv(file);
  }
  std::size_t failed = 0;
  for (const auto& row : report.rows) failed += row.ok ? 0 : 1;
  std::fprintf(stderr, "%zu runs, %zu failed\n", report.rows.size(), failed);
  return 0;
}

int cmd_calibrate(const std::string& path, const std::string& out) {
  const ScenarioConfig s = load_scenario(path);
  const auto cal = monoloc::harness::calibrate(s);
  const std::string text = monoloc::harness::drr_calibration_to_json(cal).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream(out) << text;
  }
  return cal.usable ? 0 : 3;
}

int cmd_inspect(const std::string& path) {
  const auto w = monoloc::fanet::WeightContainer::load(path);
  std::cout << "format version " << monoloc::fanet::kWeightFormatVersion << "\n";
  std::cout << "config " << w.config.to_json().dump() << "\n";
  std::cout << "metadata " << w.metadata.dump() << "\n";
  std::cout << "tensors " << w.tensors.size() << "\n";
  for (const auto& t : w.tensors) {
    std::cout << "  " << t.name << " [";
    for (std::size_t i = 0; i < t.shape.size(); ++i) std::cout << (i ? ", " : "") << t.shape[i];
    std::cout << "] " << monoloc::fanet::role_name(t.role) << "\n";
  }
  std::cout << "parameters " << w.parameter_element_count() << " (architecture "
            << monoloc::fanet::count_parameters(w.config) << ")\n";
  std::cout << "buffers " << w.buffer_element_count() << "\n";
  return 0;
}

int cmd_count(const std::string& path, const std::vector<int>& frames) {
  monoloc::fanet::FaNetConfig cfg;
  if (!path.empty()) cfg = monoloc::fanet::FaNetConfig::from_json(read_json(path));
  cfg.validate();
  std::cout << "config " << cfg.to_json().dump() << "\n";
  std::cout << "parameters " << monoloc::fanet::count_parameters(cfg) << "\n";
  std::cout << "buffers " << monoloc::fanet::count_buffers(cfg) << "\n";
  for (int t : frames) {
    std::printf("MACs at T=%d: %lld (%.2fM)\n", t, static_cast<long long>(monoloc::fanet::count_macs(cfg, t)),
                static_cast<double>(monoloc::fanet::count_macs(cfg, t)) / 1e6);
  }
  return 0;
}

int cmd_init_weights(const std::string& config_path, std::uint64_t seed, const std::string& out) {
  monoloc::fanet::FaNetConfig cfg;
  if (!config_path.empty()) cfg = monoloc::fanet::FaNetConfig::from_json(read_json(config_path));
  monoloc::fanet::random_weights(cfg, seed).save(out);
  return 0;
}

int cmd_parity(const std::string& weights, const std::string& fixture) {
  const monoloc::fanet::Model model(monoloc::fanet::WeightContainer::load(weights));
  const auto report = monoloc::fanet::check_parity(model, monoloc::tensor_io::read(fixture));
  for (const auto& c : report.cases) {
    std::printf("%-12s T=%-4d max |output error| %.3g", c.name.c_str(), c.frames, c.max_output_error);
    if (c.max_feature_error >= 0.0) std::printf("  max feature error %.3g", c.max_feature_error);
    std::printf("\n");
  }
  const bool ok = report.passed();
  std::printf("%s (tolerance %.0e per frame)\n", ok ? "PASS" : "FAIL", monoloc::fanet::kParityTolerance);
  return ok ? 0 : 1;
}

int cmd_export_rir(const std::string& path, const std::vector<double>& mic, const std::string& out) {
  const ScenarioConfig s = load_scenario(path);
  const monoloc::Point2 m = mic.size() == 2 ? monoloc::Point2{mic[0], mic[1]} : monoloc::Point2{};
  const auto rir = monoloc::acoustics::generate_rir(s.room, s.to_room(s.source, s.source_height_m),
                                                    s.to_room(m, s.mic_height_m), {s.rir_max_order, 0.0});
  monoloc::acoustics::write_wav_f32(out, rir.samples, rir.sample_rate_hz);
  std::printf("%zu samples, direct path at %zu, RT60 %.3f s, DRR %.2f dB\n", rir.samples.size(),
              rir.direct_path_index, monoloc::acoustics::compute_rt60(rir), monoloc::acoustics::compute_drr(rir));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monoloc: single-microphone source localization simulator"};
  app.require_subcommand(1);

  std::string scenario, out, file, config, fixture;
  std::optional<std::uint64_t> seed;
  std::optional<double> segment;
  std::uint64_t init_seed = 0;
  std::vector<int> frames{22, 47};
  std::vector<double> mic;

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario, "Scenario JSON file, or 'default'")->required();
  run->add_option("--out", out, "Directory for trace.csv, trajectory.dat and summary.json");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--segment", segment, "Override segment_process_s");

  auto* sweep = app.add_subcommand("sweep", "Run a sweep file and print the aggregate CSV");
  sweep->add_option("sweep-file", file, "Sweep JSON file")->required();
  sweep->add_option("--out", out, "Write the aggregate CSV here instead of stdout");

  auto* calibrate = app.add_subcommand("calibrate", "Fit the DRR calibration of a scenario");
  calibrate->add_option("scenario", scenario, "Scenario JSON file, or 'default'")->required();
  calibrate->add_option("--out", out, "Write the calibration JSON here instead of stdout");

  auto* inspect = app.add_subcommand("inspect-weights", "Describe a weight container");
  inspect->add_option("container", file, "Weight container (.fanw)")->required();

  auto* count = app.add_subcommand("count", "Parameter and MAC report for a network config");
  count->add_option("config", config, "FaNetConfig JSON (defaults when omitted)");
  count->add_option("--frames", frames, "Frame counts to report MACs for");

  auto* init = app.add_subcommand("init-weights", "Write a randomly initialized weight container");
  init->add_option("--config", config, "FaNetConfig JSON (defaults when omitted)");
  init->add_option("--seed", init_seed, "Initialization seed");
  init->add_option("--out", out, "Output container")->required();

  auto* parity = app.add_subcommand("parity", "Check a weight container against a parity fixture");
  parity->add_option("container", file, "Weight container (.fanw)")->required();
  parity->add_option("fixture", fixture, "Parity fixture")->required();

  auto* rir = app.add_subcommand("export-rir", "Write the scenario's impulse response as a float WAV");
  rir->add_option("scenario", scenario, "Scenario JSON file, or 'default'")->required();
  rir->add_option("--mic", mic, "Microphone position x y (global frame)")->expected(2);
  rir->add_option("--out", out, "Output WAV")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario, out, seed, segment);
    if (*sweep) return cmd_sweep(file, out);
    if (*calibrate) return cmd_calibrate(scenario, out);
    if (*inspect) return cmd_inspect(file);
    if (*count) return cmd_count(config, frames);
    if (*init) return cmd_init_weights(config, init_seed, out);
    if (*parity) return cmd_parity(file, fixture);
    if (*rir) return cmd_export_rir(scenario, mic, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
