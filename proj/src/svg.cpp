#include "bsr/svg.hpp"

#include "bsr/types.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace bsr::svg {
namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
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
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

double nice_step(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string render(const Plot& plot) {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double w = plot.width, h = plot.height;
  const double pw = w - ml - mr, ph = h - mt - mb;

  Range xr, yr;
  for (const auto& s : plot.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
    if (s.lower) for (double v : *s.lower) yr.add(v);
    if (s.upper) for (double v : *s.upper) yr.add(v);
  }
  xr.finish();
  yr.finish();
  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
    << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int axis = 0; axis < 2; ++axis) {
    const Range& r = axis == 0 ? xr : yr;
    const double step = nice_step(r.hi - r.lo);
    for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
      const double shown = std::abs(v) < 1e-12 * step ? 0.0 : v;
      if (axis == 0) {
        o << "<line x1=\"" << px(v) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(v) << "\" y2=\"" << mt + ph + 5
          << "\" stroke=\"black\"/><text x=\"" << px(v) << "\" y=\"" << mt + ph + 18
          << "\" text-anchor=\"middle\">" << shown << "</text>\n";
      } else {
        o << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << ml << "\" y2=\"" << py(v)
          << "\" stroke=\"black\"/><text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4
          << "\" text-anchor=\"end\">" << shown << "</text>\n";
      }
    }
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">" << escape(plot.x_label)
    << "</text>\n";
  o << "<text transform=\"translate(16," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(plot.y_label) << "</text>\n";

  int legend_row = 0;
  for (const auto& s : plot.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.lower && s.upper) {
      std::ostringstream pts;
      pts.precision(6);
      for (std::size_t i = 0; i < n && i < s.upper->size(); ++i) {
        if (std::isfinite((*s.upper)[i])) pts << px(s.x[i]) << ',' << py((*s.upper)[i]) << ' ';
      }
      for (std::size_t i = std::min(n, s.lower->size()); i-- > 0;) {
        if (std::isfinite((*s.lower)[i])) pts << px(s.x[i]) << ',' << py((*s.lower)[i]) << ' ';
      }
      o << "<polygon points=\"" << pts.str() << "\" fill=\"" << s.color << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    }
    std::ostringstream pts;
    pts.precision(6);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) pts << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    o << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
      << "\" stroke-width=\"1.6\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    if (!s.label.empty()) {
      const double ly = mt + 14 + 16 * legend_row++;
      o << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + pw - 125 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/><text x=\"" << ml + pw - 120 << "\" y=\"" << ly
        << "\">" << escape(s.label) << "</text>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

void save(const std::string& path, const Plot& plot) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << render(plot);
}

}  // namespace bsr::svg
