// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include "monoloc/localization.hpp"

namespace monoloc::localization {

void write_trace_header(std::ostream& out) {
  out << "timestamp,s_x,s_y,p11,p12,p22,innovation,accepted_flag\n";
}

void write_trace_row(std::ostream& out, const FilterStep& step) {
  // %.17g round-trips doubles exactly.
  char line[256];
  const auto& m = step.belief.mean;
  const auto& p = step.belief.covariance;
  std::snprintf(line, sizeof(line), "%.6f,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", step.timestamp_s, m.x(), m.y(),
                p(0, 0), p(0, 1), p(1, 1), step.innovation, step.accepted ? 1 : 0);
  out << line;
}

void write_trace(std::ostream& out, std::span<const FilterStep> steps) {
  write_trace_header(out);
  for (const auto& s : steps) write_trace_row(out, s);
}

}  // namespace monoloc::localization
