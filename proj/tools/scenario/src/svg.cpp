#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qfcsim/core/errors.hpp"
#include "qfcsim/io/export.hpp"
#include "qfcsim/scenario/scenario.hpp"

namespace qfcsim::scenario {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
  // Coordinates at 0.01 px are plenty and keep files small.
  return io::format_number(std::round(v * 100.0) / 100.0);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0;
      hi = 1;
    } else if (hi == lo) {
      const double pad = lo == 0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string render_svg(const Plot& plot) {
  Range xr, yr;
  for (const auto& s : plot.series) {
    for (double x : s.x) xr.add(x);
    for (double y : s.y) {
      if (plot.log_y) {
        if (y > 0) yr.add(std::log10(y));
      } else {
        yr.add(y);
      }
    }
  }
  xr.finish();
  yr.finish();

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    const double v = plot.log_y ? std::log10(y) : y;
    return kTop + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };
  auto drawable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!plot.log_y || y > 0);
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    const double xp = px(xv);
    const double yp = kTop + ph - ph * i / 4.0;
    o << "<text x=\"" << fmt(xp) << "\" y=\"" << fmt(kTop + ph + 16) << "\" text-anchor=\"middle\">"
      << io::format_number(std::round(xv * 1e4) / 1e4) << "</text>\n";
    const double label = plot.log_y ? std::pow(10.0, yv) : yv;
    o << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(yp + 4) << "\" text-anchor=\"end\">"
      << io::format_number(std::round(label * 1e4) / 1e4) << "</text>\n";
  }
  o << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 16)
    << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(18," << fmt(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(plot.y_label) << "</text>\n";

  for (std::size_t s = 0; s < plot.series.size(); ++s) {
    const auto& ser = plot.series[s];
    const char* color = kColors[s % std::size(kColors)];
    const std::size_t n = std::min(ser.x.size(), ser.y.size());
    if (ser.line) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (drawable(ser.x[i], ser.y[i])) o << fmt(px(ser.x[i])) << ',' << fmt(py(ser.y[i])) << ' ';
      }
      o << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!drawable(ser.x[i], ser.y[i])) continue;
        o << "<circle cx=\"" << fmt(px(ser.x[i])) << "\" cy=\"" << fmt(py(ser.y[i]))
          << "\" r=\"2\" fill=\"" << color << "\"/>\n";
      }
    }
    o << "<text x=\"" << fmt(kLeft + pw - 8) << "\" y=\"" << fmt(kTop + 16 + 14 * static_cast<double>(s))
      << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(ser.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::filesystem::path& path, const Plot& plot) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << render_svg(plot);
}

}  // namespace qfcsim::scenario
