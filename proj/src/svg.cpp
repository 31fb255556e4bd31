#include "bfdc/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "bfdc/errors.hpp"

namespace bfdc {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Mapping {
  double t0, t1, x0, x1;
  double left = 70, right = 780, top = 20, bottom = 450;

  std::string point(double t, double x) const {
    const double sx = left + (t - t0) / (t1 - t0) * (right - left);
    const double sy = bottom - (x - x0) / (x1 - x0) * (bottom - top);
    return px(sx) + "," + px(sy);
  }
};

}  // namespace

void write_interface_svg(const InterfaceTrack& track,
                         const std::optional<ExpansionRates>& rates, double a1,
                         double b1, const std::filesystem::path& path) {
  if (track.times.empty())
    throw ConfigError("svg: empty interface track");

  double t0 = track.times.front(), t1 = track.times.back();
  double x0 = a1, x1 = b1;
  auto widen = [&](double v) {
    x0 = std::min(x0, v);
    x1 = std::max(x1, v);
  };
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    if (track.left_pos[i]) widen(*track.left_pos[i]);
    if (track.right_pos[i]) widen(*track.right_pos[i]);
    if (rates) {
      widen(a1 - rates->k0 * track.times[i]);
      widen(b1 + rates->k1 * track.times[i]);
    }
  }
  if (t1 - t0 <= 0.0) t1 = t0 + 1.0;
  if (x1 - x0 <= 0.0) x1 = x0 + 1.0;
  const double tpad = 0.05 * (t1 - t0), xpad = 0.05 * (x1 - x0);
  Mapping map{t0 - tpad, t1 + tpad, x0 - xpad, x1 + xpad};

  auto polyline = [&](const std::function<bool(std::size_t, double&)>& get,
                      const char* color, bool dashed) {
    std::string pts;
    for (std::size_t i = 0; i < track.times.size(); ++i) {
      double x;
      if (!get(i, x)) continue;
      if (!pts.empty()) pts += ' ';
      pts += map.point(track.times[i], x);
    }
    std::string s = "  <polyline fill=\"none\" stroke=\"";
    s += color;
    s += "\" stroke-width=\"1.5\"";
    if (dashed) s += " stroke-dasharray=\"6 3\"";
    s += " points=\"" + pts + "\"/>\n";
    return s;
  };

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"500\" viewBox=\"0 0 800 500\">\n"
      << "  <rect width=\"800\" height=\"500\" fill=\"white\"/>\n";

  // Axes with five ticks per side.
  out << "  <line x1=\"" << px(map.left) << "\" y1=\"" << px(map.bottom)
      << "\" x2=\"" << px(map.right) << "\" y2=\"" << px(map.bottom)
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << px(map.left) << "\" y1=\"" << px(map.top)
      << "\" x2=\"" << px(map.left) << "\" y2=\"" << px(map.bottom)
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = map.t0 + k * (map.t1 - map.t0) / 4.0;
    const double sx = map.left + k * (map.right - map.left) / 4.0;
    out << "  <line x1=\"" << px(sx) << "\" y1=\"" << px(map.bottom)
        << "\" x2=\"" << px(sx) << "\" y2=\"" << px(map.bottom + 5)
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << px(sx) << "\" y=\"" << px(map.bottom + 20)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
    const double x = map.x0 + k * (map.x1 - map.x0) / 4.0;
    const double sy = map.bottom - k * (map.bottom - map.top) / 4.0;
    out << "  <line x1=\"" << px(map.left - 5) << "\" y1=\"" << px(sy)
        << "\" x2=\"" << px(map.left) << "\" y2=\"" << px(sy)
        << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << px(map.left - 8) << "\" y=\"" << px(sy + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << tick_label(x) << "</text>\n";
  }
  out << "  <text x=\"" << px(0.5 * (map.left + map.right)) << "\" y=\"490\""
      << " font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">t</text>\n";
  out << "  <text x=\"15\" y=\"" << px(0.5 * (map.top + map.bottom))
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">x</text>\n";

  if (rates) {
    out << polyline(
        [&](std::size_t i, double& x) {
          x = a1 - rates->k0 * track.times[i];
          return true;
        },
        "#555555", true);
    out << polyline(
        [&](std::size_t i, double& x) {
          x = b1 + rates->k1 * track.times[i];
          return true;
        },
        "#555555", true);
  }
  out << polyline(
      [&](std::size_t i, double& x) {
        if (!track.left_pos[i]) return false;
        x = *track.left_pos[i];
        return true;
      },
      "#1f77b4", false);
  out << polyline(
      [&](std::size_t i, double& x) {
        if (!track.right_pos[i]) return false;
        x = *track.right_pos[i];
        return true;
      },
      "#d62728", false);

  // Legend.
  const double lx = map.right - 170, ly = map.top + 10;
  auto legend_row = [&](int row, const char* color, bool dashed,
                        const char* label) {
    const double y = ly + 18 * row;
    out << "  <line x1=\"" << px(lx) << "\" y1=\"" << px(y) << "\" x2=\""
        << px(lx + 30) << "\" y2=\"" << px(y) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\""
        << (dashed ? " stroke-dasharray=\"6 3\"" : "") << "/>\n";
    out << "  <text x=\"" << px(lx + 38) << "\" y=\"" << px(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label
        << "</text>\n";
  };
  legend_row(0, "#1f77b4", false, "left interface");
  legend_row(1, "#d62728", false, "right interface");
  if (rates) legend_row(2, "#555555", true, "rate bound lines");

  out << "</svg>\n";
  if (!out.good()) throw ConfigError("write failed for '" + path.string() + "'");
}

}  // namespace bfdc
