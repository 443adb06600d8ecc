#include "oqs/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "oqs/errors.hpp"

namespace oqs {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const Stamp& stamp, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot write " + path.string());
  out_ << "# oqs " << stamp.version << " config " << stamp.hash << "\r\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << csv_field(header[i]);
  out_ << "\r\n";
}

CsvWriter& CsvWriter::operator<<(double x) { return *this << format_double(x); }

CsvWriter& CsvWriter::operator<<(long long x) { return *this << std::to_string(x); }

CsvWriter& CsvWriter::operator<<(const std::string& s) {
  if (!first_) out_ << ',';
  out_ << csv_field(s);
  first_ = false;
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\r\n";
  first_ = true;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string esc(const std::string& s) {
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

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const char* colour(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
  return palette[i % 7];
}

struct Frame {
  double x0, x1, y0, y1;
  bool log_x, log_y;

  double tx(double x) const {
    const double v = log_x ? std::log10(x) : x;
    return kLeft + (v - x0) / (x1 - x0) * (kWidth - kLeft - kRight);
  }
  double ty(double y) const {
    const double v = log_y ? std::log10(y) : y;
    return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

Frame make_frame(const PlotAxes& axes, const std::vector<PlotSeries>& series, double ylo_hint) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = ylo_hint, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      const double x = s.x[i], y = s.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if ((axes.log_x && x <= 0) || (axes.log_y && y <= 0)) continue;
      const double vx = axes.log_x ? std::log10(x) : x, vy = axes.log_y ? std::log10(y) : y;
      x0 = std::min(x0, vx);
      x1 = std::max(x1, vx);
      y0 = std::min(y0, vy);
      y1 = std::max(y1, vy);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y0) || !std::isfinite(y1)) y0 = 0, y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  return {x0, x1, y0 - (axes.log_y ? pad : 0.0), y1 + pad, axes.log_x, axes.log_y};
}

void header(std::ostream& o, const Stamp& stamp, const PlotAxes& axes, const Frame& f) {
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<desc>oqs " << esc(stamp.version) << " config " << esc(stamp.hash) << "</desc>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << esc(axes.title)
    << "</text>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << esc(axes.x_label)
    << "</text>\n";
  o << "<text x=\"15\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
    << kHeight / 2 << ")\">" << esc(axes.y_label) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
    << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = f.x0 + (f.x1 - f.x0) * i / 4.0, vy = f.y0 + (f.y1 - f.y0) * i / 4.0;
    const double px = kLeft + (kWidth - kLeft - kRight) * i / 4.0;
    const double py = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 4.0;
    o << "<text x=\"" << num(px) << "\" y=\"" << kHeight - kBottom + 14 << "\" text-anchor=\"middle\">"
      << tick(f.log_x ? std::pow(10.0, vx) : vx) << "</text>\n";
    o << "<text x=\"" << kLeft - 4 << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">"
      << tick(f.log_y ? std::pow(10.0, vy) : vy) << "</text>\n";
  }
}

void draw_series(std::ostream& o, const Frame& f, const std::vector<PlotSeries>& series) {
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::ostringstream pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if ((f.log_x && s.x[i] <= 0) || (f.log_y && s.y[i] <= 0)) continue;
      const double px = f.tx(s.x[i]), py = f.ty(s.y[i]);
      if (s.lines) {
        pts << num(px) << "," << num(py) << " ";
      } else {
        o << "<circle cx=\"" << num(px) << "\" cy=\"" << num(py) << "\" r=\"1.6\" fill=\"" << colour(k) << "\"/>\n";
      }
    }
    if (s.lines)
      o << "<polyline fill=\"none\" stroke=\"" << colour(k) << "\" stroke-width=\"1.5\" points=\"" << pts.str()
        << "\"/>\n";
    o << "<text x=\"" << kWidth - kRight - 6 << "\" y=\"" << kTop + 14 + 13 * k << "\" text-anchor=\"end\" fill=\""
      << colour(k) << "\">" << esc(s.label) << "</text>\n";
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const Stamp& stamp, const PlotAxes& axes,
                    const std::vector<PlotSeries>& series) {
  const Frame f = make_frame(axes, series, std::numeric_limits<double>::infinity());
  std::ostringstream o;
  header(o, stamp, axes, f);
  draw_series(o, f, series);
  o << "</svg>\n";
  write_text(path, o.str());
}

void write_svg_histogram(const std::filesystem::path& path, const Stamp& stamp, const PlotAxes& axes,
                         const Histogram& h, const std::vector<PlotSeries>& overlays) {
  const double total = h.total();
  PlotSeries bars{"", {}, {}, true};
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    bars.x.push_back(h.lo + (static_cast<double>(i) + 0.5) * h.width());
    bars.y.push_back(total > 0 ? h.counts[i] / (total * h.width()) : 0.0);
  }
  std::vector<PlotSeries> all = overlays;
  all.push_back(bars);
  PlotAxes ax = axes;
  ax.log_x = ax.log_y = false;
  Frame f = make_frame(ax, all, 0.0);
  f.x0 = h.lo;
  f.x1 = h.hi;
  std::ostringstream o;
  header(o, stamp, ax, f);
  for (std::size_t i = 0; i < bars.x.size(); ++i) {
    const double xl = f.tx(h.lo + static_cast<double>(i) * h.width());
    const double xr = f.tx(h.lo + static_cast<double>(i + 1) * h.width());
    const double yt = f.ty(bars.y[i]), yb = f.ty(0.0);
    o << "<rect x=\"" << num(xl) << "\" y=\"" << num(yt) << "\" width=\"" << num(xr - xl) << "\" height=\""
      << num(yb - yt) << "\" fill=\"#c6dbef\" stroke=\"#6baed6\"/>\n";
  }
  draw_series(o, f, overlays);
  o << "</svg>\n";
  write_text(path, o.str());
}

}  // namespace oqs
