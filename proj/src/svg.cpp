#include "tailrisk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tailrisk/error.hpp"

namespace tailrisk {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 56.0;

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double lx) const {
    return kMargin + (lx - x_min) / (x_max - x_min) * (kWidth - 2 * kMargin);
  }
  double py(double ly) const {
    return kHeight - kMargin - (ly - y_min) / (y_max - y_min) * (kHeight - 2 * kMargin);
  }
};

}  // namespace

std::string render_loglog_svg(std::span<const LogLogPoint> points,
                              const LogLogAnnotations& annotations) {
  if (points.empty()) throw Error(ErrorKind::EmptySample, "nothing to plot");
  Frame f{points.front().log10x, points.front().log10x, points.front().log10p,
          points.front().log10p};
  for (const auto& p : points) {
    f.x_min = std::min(f.x_min, p.log10x);
    f.x_max = std::max(f.x_max, p.log10x);
    f.y_min = std::min(f.y_min, p.log10p);
    f.y_max = std::max(f.y_max, p.log10p);
  }
  for (double b : annotations.bound_markers) {
    if (b > 0.0) {
      f.x_min = std::min(f.x_min, std::log10(b));
      f.x_max = std::max(f.x_max, std::log10(b));
    }
  }
  // Pad so single points and flat curves still get a non-empty frame.
  const double xpad = std::max(0.05, 0.05 * (f.x_max - f.x_min));
  const double ypad = std::max(0.05, 0.05 * (f.y_max - f.y_min));
  f.x_min -= xpad;
  f.x_max += xpad;
  f.y_min -= ypad;
  f.y_max += ypad;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<title>" << escape(annotations.title) << "</title>\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kHeight - kMargin << "\"/>\n";
  svg << "</g>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-size=\"12\">log10 x</text>\n";
  svg << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << kHeight / 2
      << ")\">log10 P(X &gt;= x)</text>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" font-size=\"10\">" << fixed(f.x_min, 2) << "</text>\n";
  svg << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" font-size=\"10\" text-anchor=\"end\">" << fixed(f.x_max, 2) << "</text>\n";

  svg << "<g class=\"points\" fill=\"steelblue\">\n";
  for (const auto& p : points) {
    svg << "<circle cx=\"" << fixed(f.px(p.log10x)) << "\" cy=\"" << fixed(f.py(p.log10p))
        << "\" r=\"2\"/>\n";
  }
  svg << "</g>\n";

  for (double b : annotations.bound_markers) {
    if (!(b > 0.0)) continue;
    const double lx = std::log10(b);
    svg << "<line class=\"bound-marker\" data-log10x=\"" << fixed(lx, 6) << "\" x1=\""
        << fixed(f.px(lx)) << "\" y1=\"" << kMargin << "\" x2=\"" << fixed(f.px(lx))
        << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (const auto& o : annotations.overlays) {
    const double l0 = std::log10(o.x_from);
    const double l1 = std::log10(o.x_to);
    svg << "<line class=\"overlay\" data-slope=\"" << fixed(o.slope, 6) << "\" x1=\""
        << fixed(f.px(l0)) << "\" y1=\"" << fixed(f.py(o.intercept + o.slope * l0))
        << "\" x2=\"" << fixed(f.px(l1)) << "\" y2=\"" << fixed(f.py(o.intercept + o.slope * l1))
        << "\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n";
    if (!o.label.empty()) {
      svg << "<text class=\"overlay-label\" x=\"" << fixed(f.px(l1)) << "\" y=\""
          << fixed(f.py(o.intercept + o.slope * l1) - 6) << "\" font-size=\"10\">"
          << escape(o.label) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tailrisk
