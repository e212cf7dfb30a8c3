#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>

#include "circular_map.hpp"

namespace circcoords {

/// RGB hex color for hue h in [0, 1) at fixed saturation and value.
inline std::string hue_color(double h, double saturation = 0.85, double value = 0.9) {
  h = frac(h) * 6.0;
  const int sector = static_cast<int>(h) % 6;
  const double f = h - std::floor(h);
  const double p = value * (1.0 - saturation);
  const double q = value * (1.0 - saturation * f);
  const double t = value * (1.0 - saturation * (1.0 - f));
  std::array<double, 3> rgb{};
  switch (sector) {
    case 0: rgb = {value, t, p}; break;
    case 1: rgb = {q, value, p}; break;
    case 2: rgb = {p, value, t}; break;
    case 3: rgb = {p, q, value}; break;
    case 4: rgb = {t, p, value}; break;
    default: rgb = {value, p, q}; break;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(rgb[0] * 255.0)),
                static_cast<int>(std::lround(rgb[1] * 255.0)), static_cast<int>(std::lround(rgb[2] * 255.0)));
  return buf;
}

struct SvgOptions {
  double size = 600.0;
  double margin = 20.0;
  double radius = 3.0;
  std::string title;
};

/// Scatter of interleaved (x, y) points colored by theta on the hue wheel.
/// Coordinates are written with 3 decimals.
inline std::string scatter_svg(std::span<const double> xy, std::span<const double> theta, const SvgOptions& opt = {}) {
  if (xy.size() != 2 * theta.size()) throw std::invalid_argument("scatter_svg: point and theta counts differ");
  double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (int k = 0; k < 2; ++k) {
      const double v = xy[2 * i + k];
      lo[k] = i ? std::min(lo[k], v) : v;
      hi[k] = i ? std::max(hi[k], v) : v;
    }
  const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
  const double scale = (opt.size - 2.0 * opt.margin) / span;
  char buf[160];
  std::string s;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                opt.size, opt.size, opt.size, opt.size);
  s += buf;
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"14\" font-size=\"12\" font-family=\"sans-serif\">", opt.margin);
    s += buf;
    for (char c : opt.title) {
      if (c == '<') s += "&lt;";
      else if (c == '>') s += "&gt;";
      else if (c == '&') s += "&amp;";
      else s += c;
    }
    s += "</text>\n";
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double x = opt.margin + (xy[2 * i] - lo[0]) * scale;
    const double y = opt.size - opt.margin - (xy[2 * i + 1] - lo[1]) * scale;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\" fill=\"%s\"/>\n", x, y, opt.radius,
                  hue_color(theta[i]).c_str());
    s += buf;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace circcoords
