#include "manip/harness/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace manip::harness {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 55;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double w, h;
  double px(double x) const { return kLeft + (x1 > x0 ? (x - x0) / (x1 - x0) : 0.5) * (w - kLeft - kRight); }
  double py(double y) const { return h - kBottom - (y1 > y0 ? (y - y0) / (y1 - y0) : 0.5) * (h - kTop - kBottom); }
};

// Round-number tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

void header(std::ostringstream& o, const PlotStyle& s) {
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s.width << "\" height=\"" << s.height
    << "\" viewBox=\"0 0 " << s.width << ' ' << s.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!s.title.empty()) {
    o << "<text x=\"" << s.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(s.title)
      << "</text>\n";
  }
}

void axes(std::ostringstream& o, const Frame& f, const PlotStyle& s, bool x_ticks) {
  const double l = kLeft, r = f.w - kRight, t = kTop, b = f.h - kBottom;
  o << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(r - l) << "\" height=\"" << num(b - t)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double y : ticks(f.y0, f.y1)) {
    o << "<line x1=\"" << num(l - 4) << "\" y1=\"" << num(f.py(y)) << "\" x2=\"" << num(l) << "\" y2=\""
      << num(f.py(y)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << num(l - 7) << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << tick_label(y)
      << "</text>\n";
  }
  if (x_ticks) {
    for (double x : ticks(f.x0, f.x1)) {
      o << "<line x1=\"" << num(f.px(x)) << "\" y1=\"" << num(b) << "\" x2=\"" << num(f.px(x)) << "\" y2=\""
        << num(b + 4) << "\" stroke=\"black\"/>"
        << "<text x=\"" << num(f.px(x)) << "\" y=\"" << num(b + 18) << "\" text-anchor=\"middle\">" << tick_label(x)
        << "</text>\n";
    }
  }
  o << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << num(f.h - 12) << "\" text-anchor=\"middle\">"
    << xml_escape(s.x_label) << "</text>\n";
  o << "<text transform=\"translate(16 " << num((t + b) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(s.y_label) << "</text>\n";
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string line_plot_svg(const std::vector<Series>& series, const PlotStyle& style) {
  if (series.empty()) throw std::invalid_argument("line_plot_svg: no series");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : series) {
    if (s.x.empty() || s.x.size() != s.mean.size() || (!s.std.empty() && s.std.size() != s.x.size())) {
      throw std::invalid_argument("line_plot_svg: series '" + s.label + "' is empty or has mismatched lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double sd = s.std.empty() ? 0.0 : s.std[i];
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      if (std::isfinite(s.mean[i])) {
        y0 = std::min(y0, s.mean[i] - sd);
        y1 = std::max(y1, s.mean[i] + sd);
      }
    }
  }
  if (style.fix_y) {
    y0 = style.y_min;
    y1 = style.y_max;
  } else if (!(y1 > y0)) {
    const double c = std::isfinite(y0) ? y0 : 0.0;
    y0 = c - 1.0;
    y1 = c + 1.0;
  }
  const Frame f{x0, x1, y0, y1, static_cast<double>(style.width), static_cast<double>(style.height)};
  std::ostringstream o;
  header(o, style);
  axes(o, f, style, true);
  auto clampy = [&](double y) { return std::clamp(y, y0, y1); };
  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % kPalette.size()];
    if (!s.std.empty()) {
      o << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        o << num(f.px(s.x[i])) << ',' << num(f.py(clampy(s.mean[i] + s.std[i]))) << ' ';
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        o << num(f.px(s.x[i])) << ',' << num(f.py(clampy(s.mean[i] - s.std[i]))) << ' ';
      }
      o << "\"/>\n";
    }
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.mean[i])) o << num(f.px(s.x[i])) << ',' << num(f.py(clampy(s.mean[i]))) << ' ';
    }
    o << "\"/>\n";
    const double ly = kTop + 14 + 18 * static_cast<double>(k);
    const double lx = style.width - kRight + 10;
    o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\"" << num(ly)
      << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>"
      << "<text x=\"" << num(lx + 25) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string bar_plot_svg(const std::vector<std::string>& labels, const std::vector<double>& mean,
                         const std::vector<double>& std, const PlotStyle& style) {
  if (labels.empty() || labels.size() != mean.size() || labels.size() != std.size()) {
    throw std::invalid_argument("bar_plot_svg: empty input or mismatched lengths");
  }
  double y0 = 0.0, y1 = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (!std::isfinite(mean[i])) continue;
    const double sd = std::isfinite(std[i]) ? std[i] : 0.0;
    y0 = std::min(y0, mean[i] - sd);
    y1 = std::max(y1, mean[i] + sd);
  }
  if (style.fix_y) {
    y0 = style.y_min;
    y1 = style.y_max;
  } else if (!(y1 > y0)) {
    y1 = y0 + 1.0;
  }
  const auto n = static_cast<double>(labels.size());
  const Frame f{0.0, n, y0, y1, static_cast<double>(style.width), static_cast<double>(style.height)};
  std::ostringstream o;
  header(o, style);
  axes(o, f, style, false);
  const double slot = (f.px(n) - f.px(0.0)) / n;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double cx = f.px(static_cast<double>(i) + 0.5);
    o << "<text x=\"" << num(cx) << "\" y=\"" << num(style.height - kBottom + 18) << "\" text-anchor=\"middle\">"
      << xml_escape(labels[i]) << "</text>\n";
    if (!std::isfinite(mean[i])) {
      o << "<text x=\"" << num(cx) << "\" y=\"" << num(f.py(y0) - 6) << "\" text-anchor=\"middle\">n/a</text>\n";
      continue;
    }
    const double m = std::clamp(mean[i], y0, y1);
    const double top = f.py(std::max(m, 0.0)), bot = f.py(std::min(m, 0.0));
    o << "<rect x=\"" << num(cx - 0.35 * slot) << "\" y=\"" << num(top) << "\" width=\"" << num(0.7 * slot)
      << "\" height=\"" << num(std::max(bot - top, 0.0)) << "\" fill=\"" << kPalette[0] << "\"/>\n";
    if (std::isfinite(std[i]) && std[i] > 0.0) {
      const double a = f.py(std::clamp(mean[i] + std[i], y0, y1)), b = f.py(std::clamp(mean[i] - std[i], y0, y1));
      o << "<line x1=\"" << num(cx) << "\" y1=\"" << num(a) << "\" x2=\"" << num(cx) << "\" y2=\"" << num(b)
        << "\" stroke=\"black\"/>"
        << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(a) << "\" x2=\"" << num(cx + 6) << "\" y2=\"" << num(a)
        << "\" stroke=\"black\"/>"
        << "<line x1=\"" << num(cx - 6) << "\" y1=\"" << num(b) << "\" x2=\"" << num(cx + 6) << "\" y2=\"" << num(b)
        << "\" stroke=\"black\"/>\n";
    }
  }
  o << "</svg>\n";
  return o.str();
}

std::string heatmap_svg(const std::vector<std::string>& row_labels, const std::vector<std::string>& col_labels,
                        const std::vector<std::vector<double>>& values, const PlotStyle& style) {
  if (row_labels.empty() || col_labels.empty() || values.size() != row_labels.size()) {
    throw std::invalid_argument("heatmap_svg: empty input or mismatched row count");
  }
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : values) {
    if (row.size() != col_labels.size()) throw std::invalid_argument("heatmap_svg: mismatched column count");
    for (double v : row) {
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    }
  }
  if (style.fix_y) lo = style.y_min, hi = style.y_max;
  if (!(hi > lo)) hi = lo + 1.0;
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  std::ostringstream o;
  header(o, style);
  o << "<defs><pattern id=\"missing\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\">"
    << "<path d=\"M0,6 L6,0\" stroke=\"#999\"/></pattern></defs>\n";
  const double l = kLeft + 30, r = style.width - kRight, t = kTop, b = style.height - kBottom;
  const double cw = (r - l) / static_cast<double>(col_labels.size());
  const double ch = (b - t) / static_cast<double>(row_labels.size());
  for (std::size_t i = 0; i < row_labels.size(); ++i) {
    const double y = t + ch * static_cast<double>(i);
    o << "<text x=\"" << num(l - 6) << "\" y=\"" << num(y + ch / 2 + 4) << "\" text-anchor=\"end\">"
      << xml_escape(row_labels[i]) << "</text>\n";
    for (std::size_t j = 0; j < col_labels.size(); ++j) {
      const double x = l + cw * static_cast<double>(j);
      const double v = values[i][j];
      if (std::isfinite(v)) {
        const double u = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
        const int red = static_cast<int>(std::lround(255 * (1.0 - u)));
        const int green = static_cast<int>(std::lround(90 + 120 * u));
        const int blue = static_cast<int>(std::lround(255 * u));
        char color[16];
        std::snprintf(color, sizeof color, "#%02x%02x%02x", red, green, blue);
        o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
          << "\" fill=\"" << color << "\" stroke=\"white\"/>"
          << "<text x=\"" << num(x + cw / 2) << "\" y=\"" << num(y + ch / 2 + 4) << "\" text-anchor=\"middle\">"
          << tick_label(v) << "</text>\n";
      } else {
        o << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cw) << "\" height=\"" << num(ch)
          << "\" fill=\"url(#missing)\" stroke=\"white\"/>\n";
      }
    }
  }
  for (std::size_t j = 0; j < col_labels.size(); ++j) {
    o << "<text x=\"" << num(l + cw * (static_cast<double>(j) + 0.5)) << "\" y=\"" << num(b + 18)
      << "\" text-anchor=\"middle\">" << xml_escape(col_labels[j]) << "</text>\n";
  }
  o << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << style.height - 12 << "\" text-anchor=\"middle\">"
    << xml_escape(style.x_label) << "</text>\n";
  o << "<text transform=\"translate(16 " << num((t + b) / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(style.y_label) << "</text>\n";
  o << "<text x=\"" << num(r + 10) << "\" y=\"" << num(t + 12) << "\">max " << tick_label(hi) << "</text>\n"
    << "<text x=\"" << num(r + 10) << "\" y=\"" << num(b) << "\">min " << tick_label(lo) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace manip::harness
