// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>

#include "monoloc/errors.hpp"
#include "monoloc/harness.hpp"

namespace monoloc::harness {

using nlohmann::json;

SweepSpec SweepSpec::from_json(const json& j, const std::filesystem::path& base_dir) {
  SweepSpec spec;
  try {
    for (const auto& entry : j.value("scenarios", json::array())) {
      if (entry.is_string()) {
        std::filesystem::path p = entry.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        spec.scenarios.push_back(ScenarioConfig::load(p));
      } else {
        spec.scenarios.push_back(ScenarioConfig::from_json(entry, base_dir));
      }
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      if (s.is_object()) {
        // {"first": a, "count": n}
        const auto first = s.at("first").get<std::uint64_t>();
        const auto count = s.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) spec.seeds.push_back(first + i);
      } else {
        spec.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    spec.segment_process_s = j.value("segment_process_s", std::vector<double>{});
    if (j.contains("trace_dir")) {
      std::filesystem::path p = j.at("trace_dir").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      spec.trace_dir = p;
    }
    spec.threads = j.value("threads", 0);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep: ") + e.what());
  }
  return spec;
}

SweepSpec SweepSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open sweep file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("sweep " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

void SweepReport::write_csv(std::ostream& out) const {
  out << "scenario,seed,segment_process_s,status,steps,failed_segments,initial_error_m,final_error_m,"
         "mae_last_quarter_m,trace_file,message\n";
  for (const auto& r : rows) {
    std::string message = r.message;
    std::replace(message.begin(), message.end(), '\n', ' ');
    std::replace(message.begin(), message.end(), '"', '\'');
    char numbers[192];
    std::snprintf(numbers, sizeof(numbers), "%zu,%zu,%.9g,%.9g,%.9g", r.steps, r.failed_segments, r.initial_error_m,
                  r.final_error_m, r.mae_last_quarter_m);
    char length[32];
    std::snprintf(length, sizeof(length), "%.3f", r.segment_process_s);
    out << r.scenario << ',' << r.seed << ',' << length << ',' << (r.ok ? "ok" : "failed") << ',' << numbers << ','
        << r.trace_file << ",\"" << message << "\"\n";
  }
}

SweepReport sweep(const SweepSpec& spec) {
  struct Job {
    ScenarioConfig scenario;
  };
  std::vector<Job> jobs;
  for (const auto& base : spec.scenarios) {
    const std::vector<std::uint64_t> seeds = spec.seeds.empty() ? std::vector<std::uint64_t>{base.seed} : spec.seeds;
    const std::vector<double> lengths =
        spec.segment_process_s.empty() ? std::vector<double>{base.segment_process_s} : spec.segment_process_s;
    for (double length : lengths) {
      for (std::uint64_t seed : seeds) {
        Job job{base};
        job.scenario.seed = seed;
        job.scenario.segment_process_s = length;
        jobs.push_back(std::move(job));
      }
    }
  }

  SweepReport report;
  report.rows.resize(jobs.size());
  if (!spec.trace_dir.empty() && !jobs.empty()) std::filesystem::create_directories(spec.trace_dir);

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const ScenarioConfig& s = jobs[i].scenario;
      SweepRow& row = report.rows[i];
      row.scenario = s.name;
      row.seed = s.seed;
      row.segment_process_s = s.segment_process_s;
      try {
        const RunResult r = run_scenario(s);
        row.ok = true;
        row.steps = r.steps.size();
        row.failed_segments = r.failed_segments;
        row.initial_error_m = r.initial_error_m;
        row.final_error_m = r.final_error_m;
        row.mae_last_quarter_m = r.mae_last_quarter_m;
        if (!spec.trace_dir.empty()) {
          char name[256];
          std::snprintf(name, sizeof(name), "%s_seed%llu_proc%03d.csv", s.name.c_str(),
                        static_cast<unsigned long long>(s.seed),
                        static_cast<int>(std::lround(s.segment_process_s * 1000.0)));
          std::ofstream out(spec.trace_dir / name, std::ios::binary);
          r.write_trace(out);
          row.trace_file = name;
        }
      } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t threads =
      std::min<std::size_t>(jobs.size(), spec.threads > 0 ? static_cast<std::size_t>(spec.threads) : hw);
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();  // join before the rows are handed out
  return report;
}

}  // namespace monoloc::harness
