#include "vareff/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vareff/error.hpp"

namespace vareff {

namespace {

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string num(double v, const char* fmt = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

/// Round step to 1/2/5 x 10^k so tick labels stay readable.
double nice_step(double range, int target_ticks) {
  const double raw = range / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0)
    step = 1.0;
  else if (norm <= 2.0)
    step = 2.0;
  else if (norm <= 5.0)
    step = 5.0;
  return step * mag;
}

std::vector<double> ticks(double lo, double hi, int target) {
  std::vector<double> out;
  if (!(hi > lo)) {
    out.push_back(lo);
    return out;
  }
  const double step = nice_step(hi - lo, target);
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + step * 1e-9; t += step) out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
  return out;
}

}  // namespace

void write_line_chart(std::ostream& out, const LineChart& chart) {
  if (chart.points.empty()) fail(errc::empty_input, "no points to plot");

  const double margin_left = 72.0, margin_right = 18.0, margin_top = 40.0, margin_bottom = 56.0;
  const double plot_w = chart.width - margin_left - margin_right;
  const double plot_h = chart.height - margin_top - margin_bottom;

  double x_lo = chart.points.front().first, x_hi = x_lo;
  double y_lo = chart.points.front().second, y_hi = y_lo;
  for (const auto& [x, y] : chart.points) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = (y_hi - y_lo) * 0.05;
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto to_px_x = [&](double x) {
    return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto to_px_y = [&](double y) {
    return margin_top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\""
      << chart.height << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "  <text x=\"" << num(chart.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
      << escape_xml(chart.title) << "</text>\n";

  // Grid and ticks.
  out << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double t : ticks(x_lo, x_hi, 6)) {
    const double px = to_px_x(t);
    out << "    <line x1=\"" << num(px) << "\" y1=\"" << num(margin_top) << "\" x2=\"" << num(px)
        << "\" y2=\"" << num(margin_top + plot_h) << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n"
        << "    <text x=\"" << num(px) << "\" y=\"" << num(margin_top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << num(t, "%.4g") << "</text>\n";
  }
  for (double t : ticks(y_lo, y_hi, 6)) {
    const double py = to_px_y(t);
    out << "    <line x1=\"" << num(margin_left) << "\" y1=\"" << num(py) << "\" x2=\""
        << num(margin_left + plot_w) << "\" y2=\"" << num(py)
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n"
        << "    <text x=\"" << num(margin_left - 6) << "\" y=\"" << num(py + 4)
        << "\" text-anchor=\"end\">" << num(t, "%.4g") << "</text>\n";
  }
  out << "  </g>\n";

  // Axes.
  out << "  <line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top + plot_h)
      << "\" x2=\"" << num(margin_left + plot_w) << "\" y2=\"" << num(margin_top + plot_h)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
      << "  <line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top) << "\" x2=\""
      << num(margin_left) << "\" y2=\"" << num(margin_top + plot_h)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

  // Axis labels.
  out << "  <text x=\"" << num(margin_left + plot_w / 2.0) << "\" y=\""
      << num(chart.height - 14.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(chart.x_label) << "</text>\n"
      << "  <text x=\"18\" y=\"" << num(margin_top + plot_h / 2.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << num(margin_top + plot_h / 2.0) << ")\">" << escape_xml(chart.y_label) << "</text>\n";

  // Series.
  out << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < chart.points.size(); ++i) {
    if (i) out << ' ';
    out << num(to_px_x(chart.points[i].first)) << ',' << num(to_px_y(chart.points[i].second));
  }
  out << "\"/>\n</svg>\n";
}

}  // namespace vareff
