#include "followme/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "followme/errors.hpp"

namespace followme {
namespace {

constexpr const char* kHeader =
    "tick,time_s,raw_distance_m,filtered_distance_m,robot_speed_mps,phase,user_in_fov";

std::string num(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell, int line)
{
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw ParseError(line, "invalid number '" + cell + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

nlohmann::ordered_json intervals_json(const std::vector<StopInterval>& intervals)
{
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [a, b] : intervals) arr.push_back({a, b});
  return arr;
}

}  // namespace

void write_trace_csv(const Trace& trace, std::ostream& out)
{
  out << kHeader << '\n';
  for (const auto& r : trace) {
    out << r.tick << ',' << num(r.time_s) << ','
        << (r.raw_distance_m ? num(*r.raw_distance_m) : "") << ','
        << (r.filtered_distance_m ? num(*r.filtered_distance_m) : "") << ','
        << num(r.robot_speed_mps) << ',' << to_string(r.phase) << ','
        << (r.user_in_fov ? "true" : "false") << '\n';
  }
}

Trace read_trace_csv(std::istream& in)
{
  Trace trace;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) {
    throw ParseError(1, "empty trace");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader) {
    throw ParseError(1, "unexpected trace header");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) {
      throw ParseError(line_no, "expected 7 columns, got " + std::to_string(cells.size()));
    }
    TraceRecord r;
    Tick tick = 0;
    const auto res = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), tick);
    if (res.ec != std::errc{} || res.ptr != cells[0].data() + cells[0].size()) {
      throw ParseError(line_no, "invalid tick '" + cells[0] + "'");
    }
    r.tick = tick;
    r.time_s = parse_double(cells[1], line_no);
    if (!cells[2].empty()) r.raw_distance_m = parse_double(cells[2], line_no);
    if (!cells[3].empty()) r.filtered_distance_m = parse_double(cells[3], line_no);
    r.robot_speed_mps = parse_double(cells[4], line_no);
    const auto phase = parse_phase(cells[5]);
    if (!phase) throw ParseError(line_no, "unknown phase '" + cells[5] + "'");
    r.phase = *phase;
    if (cells[6] == "true") {
      r.user_in_fov = true;
    } else if (cells[6] == "false") {
      r.user_in_fov = false;
    } else {
      throw ParseError(line_no, "user_in_fov must be true or false");
    }
    trace.push_back(r);
  }
  return trace;
}

void write_summary_json(const RunSummary& s, std::ostream& out)
{
  nlohmann::ordered_json j;
  j["final_phase"] = std::string(to_string(s.final_phase));
  j["stop_intervals"] = intervals_json(s.stop_intervals);
  j["total_stopped_s"] = s.total_stopped_s;
  j["total_distance_travelled_m"] = s.total_distance_travelled_m;
  j["termination_reason"] = std::string(to_string(s.termination_reason));
  out << j.dump(2) << '\n';
}

double infer_dt(const Trace& trace)
{
  if (trace.size() < 2) return 0.0;
  const auto& a = trace[0];
  const auto& b = trace[1];
  return (b.time_s - a.time_s) / static_cast<double>(b.tick - a.tick);
}

std::string report_json(const Trace& trace, double dt)
{
  const RunSummary s = summarize(trace, dt);
  nlohmann::ordered_json j;
  j["ticks"] = trace.size();
  j["dt"] = dt;
  j["final_phase"] = std::string(to_string(s.final_phase));
  j["stop_intervals"] = intervals_json(s.stop_intervals);
  j["stop_interval_count"] = s.stop_intervals.size();
  j["total_stopped_s"] = s.total_stopped_s;
  j["total_distance_travelled_m"] = s.total_distance_travelled_m;
  return j.dump(2);
}

void write_trace_csv_file(const Trace& trace, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_trace_csv(trace, out);
  if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

Trace read_trace_csv_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_trace_csv(in);
}

void write_summary_json_file(const RunSummary& summary, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_summary_json(summary, out);
  if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

}  // namespace followme
