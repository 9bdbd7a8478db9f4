#include "followme/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace followme {
namespace {

std::string px(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

template <typename Getter>
std::string series_path(const Trace& trace, const PlotLayout& layout, Getter&& get)
{
  std::string d;
  bool pen_down = false;
  for (const auto& rec : trace) {
    const std::optional<double> v = get(rec);
    if (!v) {
      pen_down = false;
      continue;
    }
    d += pen_down ? " L" : (d.empty() ? "M" : " M");
    d += px(layout.x_of(rec.time_s)) + "," + px(layout.y_of(*v));
    pen_down = true;
  }
  return d;
}

}  // namespace

double PlotLayout::x_of(double t) const
{
  const double span = t_max > t_min ? t_max - t_min : 1.0;
  return margin_left + (t - t_min) / span * (width - margin_left - margin_right);
}

double PlotLayout::y_of(double value) const
{
  const double span = y_max > y_min ? y_max - y_min : 1.0;
  return height - margin_bottom - (value - y_min) / span * (height - margin_top - margin_bottom);
}

PlotLayout make_layout(const Trace& trace, double d_des)
{
  PlotLayout l;
  if (trace.empty()) return l;
  l.t_min = trace.front().time_s;
  l.t_max = std::max(trace.back().time_s, l.t_min + 1e-9);
  double hi = d_des;
  double lo = 0.0;
  for (const auto& r : trace) {
    if (r.raw_distance_m) hi = std::max(hi, *r.raw_distance_m);
    if (r.filtered_distance_m) hi = std::max(hi, *r.filtered_distance_m);
    hi = std::max(hi, r.robot_speed_mps);
    lo = std::min(lo, r.robot_speed_mps);
  }
  l.y_min = lo;
  l.y_max = hi * 1.1;
  return l;
}

std::string emit_plot(const Trace& trace, double d_des)
{
  if (trace.empty()) {
    throw std::invalid_argument("cannot plot an empty trace");
  }
  const PlotLayout l = make_layout(trace, d_des);
  const double left = l.margin_left;
  const double right = l.width - l.margin_right;
  const double top = l.margin_top;
  const double bottom = l.height - l.margin_bottom;

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(l.width) << "\" height=\""
    << px(l.height) << "\" viewBox=\"0 0 " << px(l.width) << " " << px(l.height) << "\">\n"
    << "  <rect x=\"0\" y=\"0\" width=\"" << px(l.width) << "\" height=\"" << px(l.height)
    << "\" fill=\"white\"/>\n";

  // axes
  o << "  <g id=\"axes\" stroke=\"black\" stroke-width=\"1\">\n"
    << "    <line x1=\"" << px(left) << "\" y1=\"" << px(bottom) << "\" x2=\"" << px(right)
    << "\" y2=\"" << px(bottom) << "\"/>\n"
    << "    <line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left)
    << "\" y2=\"" << px(bottom) << "\"/>\n"
    << "  </g>\n";
  o << "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = l.t_min + (l.t_max - l.t_min) * i / 5.0;
    const double v = l.y_min + (l.y_max - l.y_min) * i / 5.0;
    char tl[32];
    char vl[32];
    std::snprintf(tl, sizeof(tl), "%.1f", t);
    std::snprintf(vl, sizeof(vl), "%.2f", v);
    o << "    <text x=\"" << px(l.x_of(t)) << "\" y=\"" << px(bottom + 16)
      << "\" text-anchor=\"middle\">" << tl << "</text>\n"
      << "    <text x=\"" << px(left - 6) << "\" y=\"" << px(l.y_of(v) + 4)
      << "\" text-anchor=\"end\">" << vl << "</text>\n";
  }
  o << "    <text x=\"" << px((left + right) / 2) << "\" y=\"" << px(l.height - 8)
    << "\" text-anchor=\"middle\">time [s]</text>\n"
    << "    <text x=\"14\" y=\"" << px((top + bottom) / 2) << "\" transform=\"rotate(-90 14 "
    << px((top + bottom) / 2) << ")\" text-anchor=\"middle\">distance [m] / speed [m/s]</text>\n"
    << "  </g>\n";

  struct Series
  {
    const char* label;
    const char* color;
    std::string d;
  };
  const Series series[] = {
      {"raw", "#9e9e9e", series_path(trace, l, [](const TraceRecord& r) { return r.raw_distance_m; })},
      {"ema", "#1565c0", series_path(trace, l, [](const TraceRecord& r) { return r.filtered_distance_m; })},
      {"speed", "#2e7d32",
       series_path(trace, l, [](const TraceRecord& r) { return std::optional<double>(r.robot_speed_mps); })},
  };
  for (const auto& s : series) {
    o << "  <g id=\"series-" << s.label << "\" class=\"series\" data-label=\"" << s.label << "\">\n"
      << "    <path d=\"" << s.d << "\" fill=\"none\" stroke=\"" << s.color
      << "\" stroke-width=\"1.2\"/>\n"
      << "  </g>\n";
  }
  const double y_thr = l.y_of(d_des);
  o << "  <g id=\"series-threshold\" class=\"series\" data-label=\"threshold\">\n"
    << "    <line x1=\"" << px(left) << "\" y1=\"" << px(y_thr) << "\" x2=\"" << px(right)
    << "\" y2=\"" << px(y_thr) << "\" stroke=\"#c62828\" stroke-dasharray=\"6,4\"/>\n"
    << "  </g>\n";

  o << "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  const char* legend[][2] = {
      {"raw", "#9e9e9e"}, {"ema", "#1565c0"}, {"speed", "#2e7d32"}, {"threshold", "#c62828"}};
  double ly = top + 12;
  for (const auto& [label, color] : legend) {
    o << "    <line x1=\"" << px(right + 10) << "\" y1=\"" << px(ly - 4) << "\" x2=\""
      << px(right + 30) << "\" y2=\"" << px(ly - 4) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>\n"
      << "    <text x=\"" << px(right + 36) << "\" y=\"" << px(ly) << "\">" << label << "</text>\n";
    ly += 18;
  }
  o << "  </g>\n</svg>\n";
  return o.str();
}

void emit_plot_file(const Trace& trace, double d_des, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << emit_plot(trace, d_des);
  if (!out) throw std::runtime_error("I/O error writing '" + path + "'");
}

}  // namespace followme
