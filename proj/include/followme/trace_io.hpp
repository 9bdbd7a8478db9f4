#pragma once

#include <iosfwd>
#include <string>

#include "followme/runner.hpp"

namespace followme {

/// Header: tick,time_s,raw_distance_m,filtered_distance_m,robot_speed_mps,phase,user_in_fov
/// Absent measurements are empty cells. Numbers use shortest round-trip form.
void write_trace_csv(const Trace& trace, std::ostream& out);
Trace read_trace_csv(std::istream& in);

void write_summary_json(const RunSummary& summary, std::ostream& out);

/// Stop intervals plus totals, as printed by `followme report`.
std::string report_json(const Trace& trace, double dt);

/// Infers the timestep from the first two records (0 for shorter traces).
double infer_dt(const Trace& trace);

// File variants; throw std::runtime_error naming the path on I/O failure.
void write_trace_csv_file(const Trace& trace, const std::string& path);
Trace read_trace_csv_file(const std::string& path);
void write_summary_json_file(const RunSummary& summary, const std::string& path);

}  // namespace followme
