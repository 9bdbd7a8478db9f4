#pragma once

#include <string>

#include "followme/runner.hpp"

namespace followme {

/// Data-to-pixel mapping shared by every series of one plot.
struct PlotLayout
{
  double width{960.0};
  double height{420.0};
  double margin_left{60.0};
  double margin_right{110.0};
  double margin_top{20.0};
  double margin_bottom{45.0};
  double t_min{0.0};
  double t_max{1.0};
  double y_min{0.0};
  double y_max{1.0};

  double x_of(double t) const;
  double y_of(double value) const;
};

/// Axis ranges covering every series and the threshold line.
PlotLayout make_layout(const Trace& trace, double d_des);

/// SVG with series "raw", "ema", "speed" and a "threshold" line at d_des.
/// Throws std::invalid_argument for an empty trace.
std::string emit_plot(const Trace& trace, double d_des);

void emit_plot_file(const Trace& trace, double d_des, const std::string& path);

}  // namespace followme
