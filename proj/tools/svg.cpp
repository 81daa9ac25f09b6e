#include "svg.hpp"

#include "qpc/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace qpc::svg {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// 1, 2 or 5 times a power of ten, about n ticks across [lo, hi]
double nice_step(double lo, double hi, int n) {
  const double raw = (hi - lo) / n;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * p >= raw) return m * p;
  return 10 * p;
}

}  // namespace

std::string Plot::render(int width, int height) const {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  for (double r : circles) {
    x0 = std::min(x0, -r);
    x1 = std::max(x1, r);
    y0 = std::min(y0, -r);
    y1 = std::max(y1, r);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

  const double left = 70, right = 160, top = 40, bottom = 50;
  double pw = width - left - right, ph = height - top - bottom;
  if (equal_aspect) {
    const double s = std::min(pw / (x1 - x0), ph / (y1 - y0));
    pw = s * (x1 - x0);
    ph = s * (y1 - y0);
  }
  auto X = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto Y = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

  std::string o = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                  std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(left) + "\" y=\"24\" font-size=\"14\">" + escape(title) + "</text>\n";
  o += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  const double sx = nice_step(x0, x1, 6), sy = nice_step(y0, y1, 6);
  for (double t = std::ceil(x0 / sx) * sx; t <= x1; t += sx) {
    o += "<line x1=\"" + num(X(t)) + "\" y1=\"" + num(top + ph) + "\" x2=\"" + num(X(t)) + "\" y2=\"" +
         num(top + ph + 5) + "\" stroke=\"black\"/>";
    o += "<text x=\"" + num(X(t)) + "\" y=\"" + num(top + ph + 18) + "\" text-anchor=\"middle\">" + tick_label(t) +
         "</text>\n";
  }
  for (double t = std::ceil(y0 / sy) * sy; t <= y1; t += sy) {
    o += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(Y(t)) + "\" x2=\"" + num(left) + "\" y2=\"" + num(Y(t)) +
         "\" stroke=\"black\"/>";
    o += "<text x=\"" + num(left - 8) + "\" y=\"" + num(Y(t) + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
         "</text>\n";
  }
  o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(top + ph + 40) + "\" text-anchor=\"middle\">" +
       escape(xlabel) + "</text>\n";
  o += "<text transform=\"translate(16," + num(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(ylabel) + "</text>\n";

  for (double r : circles)
    o += "<ellipse cx=\"" + num(X(0)) + "\" cy=\"" + num(Y(0)) + "\" rx=\"" + num(X(r) - X(0)) + "\" ry=\"" +
         num(Y(0) - Y(r)) + "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = kColors[s % (sizeof kColors / sizeof *kColors)];
    if (ser.points) {
      for (std::size_t i = 0; i < ser.x.size(); ++i)
        o += "<circle cx=\"" + num(X(ser.x[i])) + "\" cy=\"" + num(Y(ser.y[i])) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    } else {
      o += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(color) + "\" points=\"";
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (!std::isfinite(ser.y[i])) continue;
        o += num(X(ser.x[i])) + "," + num(Y(ser.y[i])) + " ";
      }
      o += "\"/>\n";
    }
    const double ly = top + 14 + 16 * static_cast<double>(s);
    o += "<rect x=\"" + num(left + pw + 12) + "\" y=\"" + num(ly - 8) + "\" width=\"10\" height=\"10\" fill=\"" +
         color + "\"/><text x=\"" + num(left + pw + 28) + "\" y=\"" + num(ly + 1) + "\">" + escape(ser.label) +
         "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

void Plot::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::invalid_input, "cannot write '" + path + "'");
  out << render();
}

}  // namespace qpc::svg
